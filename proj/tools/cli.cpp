#include "cli.hpp"

#include "dfq/catalog.hpp"
#include "dfq/cost_model.hpp"
#include "dfq/csv.hpp"
#include "dfq/evaluator.hpp"
#include "dfq/optimizer.hpp"
#include "dfq/parser.hpp"
#include "dfq/schema_inference.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace dfq::cli {

namespace {

struct Options
{
    std::vector<std::string> catalogs;
    std::string block_factor = "50";
    std::string memory_blocks = "1000000";
    std::string tuple_bytes = "80";
    std::string selectivity = "0.1";
    std::string engine = "native";
    std::string optimize = "heuristic";
    std::size_t budget = 10'000;
    std::string format = "table";
    bool strict_memory = false;
    std::string query;
    std::string relation;

    // cost
    std::optional<std::string> N, V, B;
    bool select_first = false, select_last = false, in_memory = false, on_disk = false;
    bool strategies = false, order = false;
    std::optional<std::string> sweep_axis;
    std::string from = "1", to = "40", step = "1";
};

/// Raised for flag values that do not make sense; reported with exit code `kUsage`.
class UsageError : public Error
{
  public:
    using Error::Error;
};

Rational rational_flag(const std::string &flag, const std::string &text)
{
    auto r = parse_rational(text);
    if (not r) throw UsageError("--" + flag + ": not a number: '" + text + "'");
    return *r;
}

CostParams cost_params(const Options &o)
{
    CostParams p;
    p.F = rational_flag("block-factor", o.block_factor);
    p.M = rational_flag("memory-blocks", o.memory_blocks);
    p.tuple_bytes = rational_flag("tuple-bytes", o.tuple_bytes);
    p.Q = rational_flag("Q", o.selectivity);
    p.strict_memory = o.strict_memory;
    if (p.F < 1) throw InvalidArgument("F must be at least 1");
    if (p.M < 1) throw InvalidArgument("M must be at least 1");
    if (p.Q < 0 or p.Q > 1) throw InvalidArgument("Q must lie in [0, 1]");
    return p;
}

DfStrategy engine(const Options &o)
{
    if (o.engine == "native") return DfStrategy::Native;
    if (o.engine == "composite") return DfStrategy::Composite;
    throw UsageError("--engine must be native or composite");
}

OptimizerConfig optimizer_config(const Options &o)
{
    OptimizerConfig cfg;
    auto mode = parse_optimize_mode(o.optimize);
    if (not mode) throw UsageError("--optimize must be off, heuristic or exhaustive");
    cfg.mode = *mode;
    cfg.budget = o.budget;
    cfg.params = cost_params(o);
    cfg.strategy = engine(o);
    return cfg;
}

Catalog load_catalog(const Options &o, std::ostream &err)
{
    std::vector<std::string> paths = o.catalogs;
    if (paths.empty())
        if (const char *env = std::getenv(kCatalogEnv); env and *env) paths.emplace_back(env);
    Catalog cat;
    std::vector<std::string> warnings;
    for (auto &p : paths) load_catalog_path(cat, p, &warnings);
    for (auto &w : warnings) err << "warning: " << w << "\n";
    return cat;
}

std::string blocks(const Rational &r) { return ceil(r).str(); }

// --- relation output ---

std::string csv_cell(const std::string &s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos and (s.empty() or (s.front() != ' ' and s.back() != ' ')))
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

nlohmann::json json_value(const Value &v)
{
    if (v.is_absent()) return nullptr;
    switch (*v.domain()) {
        case Domain::Integer: return v.as_integer();
        case Domain::Decimal: return v.as_decimal();
        case Domain::Timestamp:
        case Domain::Text: return to_display(v);
    }
    return nullptr;
}

void print_relation(const Relation &r, const std::string &format, std::ostream &out)
{
    const auto names = r.schema().names();
    if (format == "csv") {
        for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << csv_cell(names[j]);
        out << "\n";
        for (std::size_t i = 0; i < r.size(); ++i) {
            Row row = r.row(i);
            for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << csv_cell(to_display(row[j]));
            out << "\n";
        }
    } else if (format == "json-lines") {
        for (std::size_t i = 0; i < r.size(); ++i) {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            Row row = r.row(i);
            for (std::size_t j = 0; j < row.size(); ++j) obj[names[j]] = json_value(row[j]);
            out << obj.dump() << "\n";
        }
    } else {
        std::vector<std::size_t> width;
        for (auto &n : names) width.push_back(n.size());
        std::vector<std::vector<std::string>> cells;
        for (std::size_t i = 0; i < r.size(); ++i) {
            auto &line = cells.emplace_back();
            Row row = r.row(i);
            for (std::size_t j = 0; j < row.size(); ++j) {
                line.push_back(to_display(row[j]));
                width[j] = std::max(width[j], line.back().size());
            }
        }
        auto emit = [&](const std::vector<std::string> &line) {
            std::string s;
            for (std::size_t j = 0; j < line.size(); ++j) {
                if (j) s += "  ";
                s += line[j] + std::string(width[j] - line[j].size(), ' ');
            }
            while (not s.empty() and s.back() == ' ') s.pop_back();
            out << s << "\n";
        };
        emit(names);
        std::vector<std::string> rule;
        for (auto w : width) rule.push_back(std::string(w, '-'));
        emit(rule);
        for (auto &line : cells) emit(line);
        out << "(" << r.size() << (r.size() == 1 ? " row" : " rows") << ")\n";
    }
}

// --- commands ---

int cmd_run(const Options &o, std::ostream &out, std::ostream &err)
{
    if (o.format != "table" and o.format != "csv" and o.format != "json-lines")
        throw UsageError("--format must be table, csv or json-lines");
    Catalog cat = load_catalog(o, err);
    Expr e = parse(o.query);
    Schema schema = infer_schema(e, cat);
    OptimizerConfig cfg = optimizer_config(o);
    PlanChoice plan = optimize(e, cat, cfg);
    EvalConfig ecfg;
    ecfg.df_strategy = cfg.strategy;
    Relation r = evaluate(plan.chosen, cat, ecfg).aligned_to(schema);
    print_relation(r, o.format, out);
    return kOk;
}

void print_plan(const PlanEstimate &est, std::ostream &out)
{
    std::vector<std::string> left;
    std::size_t width = 0;
    for (auto &n : est.nodes) {
        left.push_back(std::string(2 * n.path.size() + 2, ' ') + n.label);
        width = std::max(width, left.back().size());
    }
    for (std::size_t i = 0; i < est.nodes.size(); ++i) {
        auto &n = est.nodes[i];
        out << left[i] << std::string(width - left[i].size() + 2, ' ') << "tuples=" << blocks(n.tuples)
            << " blocks=" << blocks(n.blocks) << " cost=" << blocks(n.own.total());
        if (n.own.components.size() > 1 or
            (n.own.components.size() == 1 and n.own.components.begin()->first != CostComponent::Scan and
             n.own.components.begin()->first != CostComponent::Other)) {
            out << " (";
            bool first = true;
            for (auto &[c, v] : n.own.components) {
                out << (first ? "" : " ") << to_string(c) << "=" << blocks(v);
                first = false;
            }
            out << ")";
        }
        if (n.order) out << " order=" << blocks(*n.order);
        out << "\n";
    }
    out << "  total: " << blocks(est.total.total()) << " blocks\n";
}

int cmd_explain(const Options &o, std::ostream &out, std::ostream &err)
{
    Catalog cat = load_catalog(o, err);
    Expr e = parse(o.query);
    infer_schema(e, cat);
    OptimizerConfig cfg = optimizer_config(o);
    PlanChoice plan = optimize(e, cat, cfg);

    auto tree = [&](const Expr &x) {
        std::istringstream lines(render_tree(x));
        for (std::string line; std::getline(lines, line);) out << "  " << line << "\n";
    };
    out << "original:\n";
    tree(plan.original);
    if (not plan.costed) {
        err << "error: " << plan.cost_error << "\n";
        return kMissing;
    }
    out << "estimate (" << to_string(cfg.strategy) << " df, F=" << to_string(cfg.params.F)
        << ", M=" << to_string(cfg.params.M) << ", Q=" << to_string(cfg.params.Q) << "):\n";
    print_plan(plan.est_original, out);

    out << "optimizer: " << to_string(cfg.mode) << "\n";
    out << "applied rules:\n";
    if (plan.applied_rules.empty()) out << "  (none)\n";
    bool p20 = false;
    for (auto &a : plan.applied_rules) {
        out << "  " << to_string(a.rule) << " " << to_string(a.dir) << " at " << to_string(a.path) << "  "
            << rule_title(a.rule) << "\n";
        p20 = p20 or a.rule == RuleId::P20;
    }
    if (p20) out << "  note: the two copies of the joined relation are told apart by the d. and u. prefixes\n";
    if (not plan.blocked.empty()) {
        out << "blocked:\n";
        for (auto &b : plan.blocked)
            out << "  " << to_string(b.rule) << " " << to_string(b.dir) << " at " << to_string(b.path)
                << "  blocked: side condition: " << b.reason << "\n";
    }
    if (plan.budget_exhausted) out << "search budget of " << cfg.budget << " node visits exhausted; greedy pass added\n";
    out << "chosen:\n";
    tree(plan.chosen);
    out << "estimate:\n";
    print_plan(plan.est_chosen, out);
    out << "est_original: " << blocks(plan.est_original.total.total())
        << " blocks, est_chosen: " << blocks(plan.est_chosen.total.total()) << " blocks\n";
    return kOk;
}

int cmd_cost(const Options &o, std::ostream &out)
{
    CostParams p = cost_params(o);
    if (o.N) p.N = rational_flag("N", *o.N);
    if (o.V) p.V = rational_flag("V", *o.V);

    if (o.strategies) {
        if (not o.B) throw UsageError("--strategies needs --B");
        Rational B = rational_flag("B", *o.B);
        if (B < 1) throw InvalidArgument("B must be at least 1");
        if (not o.N) p.N = B * p.F;
        if (not o.V) p.V = std::min(p.V, p.N);
        p.validate();
        std::vector<std::array<std::string, 3>> rows;
        for (auto &s : strategy_costs(B, p)) rows.push_back({std::string(to_string(s.strategy)), s.order, blocks(s.blocks)});
        std::size_t w0 = 8, w1 = 5;
        for (auto &r : rows) w0 = std::max(w0, r[0].size()), w1 = std::max(w1, r[1].size());
        out << std::left << std::setw(int(w0)) << "strategy" << "  " << std::setw(int(w1)) << "order" << "  blocks\n";
        for (auto &r : rows) out << std::setw(int(w0)) << r[0] << "  " << std::setw(int(w1)) << r[1] << "  " << r[2] << "\n";
        out << std::right;
        return kOk;
    }
    if (o.sweep_axis) {
        auto axis = parse_sweep_axis(*o.sweep_axis);
        if (not axis) throw UsageError("--sweep must be events_per_case, N, M or Q");
        if (*axis != SweepAxis::N and *axis != SweepAxis::EventsPerCase) p.validate();
        out << sweep_csv(sweep(p, *axis, rational_flag("from", o.from), rational_flag("to", o.to),
                               rational_flag("step", o.step)));
        return kOk;
    }
    p.validate();
    if (o.select_first or o.select_last) {
        if (o.select_first == o.select_last) throw UsageError("give one of --select-first and --select-last");
        if (o.in_memory == o.on_disk) throw UsageError("give one of --in-memory and --on-disk");
        Sequence seq = o.select_first ? Sequence::SelectFirst : Sequence::SelectLast;
        out << to_string(table5_order(seq, o.in_memory, p)) << "\n";
        return kOk;
    }
    if (o.order) {
        out << to_string(order_of_cost(p)) << "\n";
        return kOk;
    }
    CostEstimate e = composite_df_cost(p);
    out << "B_Log: " << blocks(p.log_blocks()) << "\n";
    out << "|t1|: " << to_string(following_pairs(p.N, p.V)) << "\n";
    out << "|t2|: " << to_string(indirect_pairs(p.N, p.V)) << "\n";
    for (auto c : {CostComponent::Join1, CostComponent::Result1, CostComponent::Join2, CostComponent::Result2,
                   CostComponent::Minus})
        out << to_string(c) << ": " << blocks(e.component(c)) << "\n";
    out << "total: " << e.total_blocks().str() << "\n";
    return kOk;
}

int cmd_validate(const Options &o, std::ostream &out, std::ostream &err)
{
    Catalog cat = load_catalog(o, err);
    const Relation &r = cat.relation(o.relation);
    const RelationMeta &meta = cat.meta(o.relation);
    if (not meta.case_attr or not meta.time_attr) {
        err << "error: relation '" << o.relation << "' declares no case and time attributes\n";
        return kMissing;
    }
    bool declared = meta.totality_facts.size() > 0;
    for (auto &[a, c] : meta.attr_classes) declared = declared or c != AttrClass::Other;
    if (not declared) {
        err << "error: relation '" << o.relation << "' declares no attribute classes or totality facts\n";
        return kMissing;
    }
    auto violations = validate_classes(r, meta);
    for (auto &v : violations)
        out << v.attribute << " (" << to_string(v.declared) << "): " << *meta.case_attr << "="
            << to_display(v.case_value) << " " << *meta.time_attr << "=" << to_display(v.event_time) << ": "
            << v.reason << "\n";
    std::size_t broken = 0;
    for (auto &fact : meta.totality_facts) {
        if (check_totality(parse(fact), cat)) continue;
        out << "totality: " << fact << ": some left tuple has no join partner\n";
        ++broken;
    }
    if (violations.empty() and broken == 0) {
        out << "no violations\n";
        return kOk;
    }
    out << violations.size() + broken << (violations.size() + broken == 1 ? " violation" : " violations") << "\n";
    return kViolations;
}

void add_catalog_flags(CLI::App *sub, Options &o)
{
    sub->add_option("-c,--catalog", o.catalogs, "catalog path: directory, .meta sidecar or .csv (repeatable)");
}

void add_cost_flags(CLI::App *sub, Options &o)
{
    sub->add_option("--F,--block-factor", o.block_factor, "tuples per block")->capture_default_str();
    sub->add_option("--M,--memory-blocks", o.memory_blocks, "memory size in blocks")->capture_default_str();
    sub->add_option("--tuple-bytes", o.tuple_bytes, "tuple size in bytes (display only)")->capture_default_str();
    sub->add_option("--Q,--selectivity", o.selectivity, "default selection fraction")->capture_default_str();
    sub->add_flag("--strict-memory", o.strict_memory, "second join result must fit beside the log");
}

void add_plan_flags(CLI::App *sub, Options &o)
{
    add_catalog_flags(sub, o);
    add_cost_flags(sub, o);
    sub->add_option("--engine", o.engine, "native|composite")->capture_default_str();
    sub->add_option("--optimize", o.optimize, "off|heuristic|exhaustive")->capture_default_str();
    sub->add_option("--budget", o.budget, "node visits for exhaustive search")->capture_default_str();
    sub->add_option("query", o.query, "query text")->required();
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Relational algebra over event logs with a directly-follows operator", "dfq"};
    app.require_subcommand(1);
    Options o;

    auto *run = app.add_subcommand("run", "evaluate a query and print the result");
    add_plan_flags(run, o);
    run->add_option("--format", o.format, "table|csv|json-lines")->capture_default_str();

    auto *explain = app.add_subcommand("explain", "show the original and chosen plans with estimated costs");
    add_plan_flags(explain, o);

    auto *cost = app.add_subcommand("cost", "cost formulas without data");
    add_cost_flags(cost, o);
    cost->add_option("--N", o.N, "events");
    cost->add_option("--V", o.V, "cases");
    cost->add_option("--B", o.B, "log blocks for --strategies");
    cost->add_flag("--select-first", o.select_first, "cost order with the selection below directly-follows");
    cost->add_flag("--select-last", o.select_last, "cost order with the selection above directly-follows");
    cost->add_flag("--in-memory", o.in_memory, "intermediate results fit in memory");
    cost->add_flag("--on-disk", o.on_disk, "intermediate results spill to disk");
    cost->add_flag("--strategies", o.strategies, "compare the four ways of obtaining directly-follows pairs");
    cost->add_flag("--order", o.order, "order of magnitude of the composite cost");
    cost->add_option("--sweep", o.sweep_axis, "events_per_case|N|M|Q: print a cost curve as CSV");
    cost->add_option("--from", o.from)->capture_default_str();
    cost->add_option("--to", o.to)->capture_default_str();
    cost->add_option("--step", o.step)->capture_default_str();

    auto *validate = app.add_subcommand("validate", "check declared attribute classes and totality facts");
    add_catalog_flags(validate, o);
    validate->add_option("relation", o.relation, "relation name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (run->parsed()) return cmd_run(o, out, err);
        if (explain->parsed()) return cmd_explain(o, out, err);
        if (cost->parsed()) return cmd_cost(o, out);
        return cmd_validate(o, out, err);
    } catch (const ParseError &e) {
        err << describe(e, o.query) << "\n";
        return kParseError;
    } catch (const MissingRelationError &e) {
        err << "error: " << e.what() << "\n";
        return kMissing;
    } catch (const MissingStatsError &e) {
        err << "error: " << e.what() << "\n";
        return kMissing;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidArgument &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const CsvError &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kSchemaError;
    } catch (const std::filesystem::filesystem_error &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
}

} // namespace dfq::cli
