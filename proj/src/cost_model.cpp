#include "dfq/cost_model.hpp"

#include "dfq/parser.hpp"

#include <cmath>
#include <sstream>

namespace dfq {

namespace {

Rational ceil_r(const Rational &r) { return Rational(ceil(r)); }

} // namespace

Rational CostParams::log_blocks() const { return ceil_r(N / F); }

void CostParams::validate() const
{
    if (V < 1) throw InvalidArgument("V must be at least 1");
    if (N < V) throw InvalidArgument("N must be at least V");
    if (F < 1) throw InvalidArgument("F must be at least 1");
    if (M < 1) throw InvalidArgument("M must be at least 1");
    if (Q < 0 or Q > 1) throw InvalidArgument("Q must lie in [0, 1]");
}

std::string_view to_string(CostComponent c)
{
    switch (c) {
        case CostComponent::Join1: return "join1";
        case CostComponent::Result1: return "result1";
        case CostComponent::Join2: return "join2";
        case CostComponent::Result2: return "result2";
        case CostComponent::Minus: return "minus";
        case CostComponent::Scan: return "scan";
        case CostComponent::Other: return "other";
    }
    return "?";
}

void CostEstimate::add(CostComponent c, const Rational &blocks) { components[c] += blocks; }

void CostEstimate::add(const CostEstimate &other)
{
    for (auto &[c, v] : other.components) components[c] += v;
}

Rational CostEstimate::component(CostComponent c) const
{
    auto it = components.find(c);
    return it == components.end() ? Rational(0) : it->second;
}

Rational CostEstimate::total() const
{
    Rational t = 0;
    for (auto &[c, v] : components) t += v;
    return t;
}

BigInt CostEstimate::total_blocks() const { return ceil(total()); }

Rational bnl_cost(const Rational &b_r, const Rational &b_s, const Rational &M)
{
    if (std::min(b_r, b_s) <= M) return b_r + b_s;
    return b_r + (b_s / M) * b_r;
}

Rational following_pairs(const Rational &N, const Rational &V)
{
    if (V == 0) return 0;
    Rational n = N / V;
    return V * (n * (n - 1)) / 2;
}

Rational indirect_pairs(const Rational &N, const Rational &V)
{
    if (V == 0) return 0;
    Rational n = N / V;
    return std::max(Rational(0), Rational(following_pairs(N, V) - V * (n - 1)));
}

CostEstimate composite_df_cost(const CostParams &p)
{
    const Rational B = p.log_blocks();
    const Rational size1 = following_pairs(p.N, p.V) * 2 / p.F;
    const Rational size2 = indirect_pairs(p.N, p.V) * 2 / p.F;
    const bool log_fits = B <= p.M;
    const bool fits1 = size1 <= p.M;
    const bool fits2 = p.strict_memory ? size2 <= p.M - B : size2 <= p.M;

    CostEstimate e;
    e.add(CostComponent::Join1, log_fits ? B : bnl_cost(B, B, p.M));
    e.add(CostComponent::Result1, fits1 ? Rational(0) : size1);
    e.add(CostComponent::Join2, log_fits ? Rational(0) : B + size1 / p.M * B);
    e.add(CostComponent::Result2, fits2 ? Rational(0) : size2);
    e.add(CostComponent::Minus, fits2 ? Rational(0) : size1 + size1 / p.M * size2);
    return e;
}

Rational order_of_cost(const CostParams &p)
{
    Rational inter = p.N * p.N / p.V / p.F;
    return inter / p.M * inter;
}

Rational table5_order(Sequence seq, bool fits, const CostParams &p)
{
    Rational B = p.log_blocks();
    Rational n = p.N / p.V;
    Rational base = fits ? B : B * n * n;
    return seq == Sequence::SelectFirst ? p.Q * base : base;
}

std::string_view to_string(Strategy s)
{
    switch (s) {
        case Strategy::IntermediateStorage: return "intermediate storage";
        case Strategy::DatabaseConnection: return "database connection";
        case Strategy::NativeOperator: return "native operator";
        case Strategy::CompositeOperator: return "composite operator";
    }
    return "?";
}

std::vector<StrategyCost> strategy_costs(const Rational &B, const CostParams &p)
{
    CostParams q = p;
    q.N = B * p.F;
    return {
        {Strategy::IntermediateStorage, "3 * B", 3 * B},
        {Strategy::DatabaseConnection, "B", B},
        {Strategy::NativeOperator, "B", B},
        {Strategy::CompositeOperator, "B up to B^3", composite_df_cost(q).total()},
    };
}

namespace {

struct Planner
{
    const Catalog &cat;
    const CostParams &p;
    DfStrategy strategy;
    std::vector<NodeCost> nodes;

    std::optional<Rational> declared_selectivity(const Expr &e, const std::string &key)
    {
        if (auto *b = e.as<BaseRel>()) {
            auto &sel = cat.meta(b->name).stats.selectivity;
            if (auto it = sel.find(key); it != sel.end()) return it->second;
            return std::nullopt;
        }
        for (auto &c : e.children())
            if (auto q = declared_selectivity(c, key)) return q;
        return std::nullopt;
    }

    Rational blocks_of(const Rational &tuples, const Rational &width) { return ceil_r(tuples * width / p.F); }

    std::size_t visit(const Expr &e, NodePath &path, bool read_by_parent = false)
    {
        std::size_t slot = nodes.size();
        nodes.push_back(NodeCost{path, render_node(e), {}, 0, {}, 1, 0, {}});
        auto child = [&](const Expr &c, std::size_t i, bool read = false) {
            path.push_back(i);
            std::size_t s = visit(c, path, read);
            path.pop_back();
            return nodes[s];
        };
        NodeCost out = nodes[slot];
        std::visit(
            [&](auto &n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, BaseRel>) {
                    auto &meta = cat.meta(n.name);
                    out.tuples = meta.stats.events ? Rational(*meta.stats.events) : Rational(cat.relation(n.name).size());
                    if (meta.stats.cases) out.cases = Rational(*meta.stats.cases);
                    out.blocks = blocks_of(out.tuples, 1);
                    if (not read_by_parent) out.own.add(CostComponent::Scan, out.blocks);
                } else if constexpr (std::is_same_v<T, Select>) {
                    Rational q = declared_selectivity(n.child, render(n.cond)).value_or(p.Q);
                    bool over_base = n.child.template is<BaseRel>();
                    NodeCost in = child(n.child, 0, over_base);
                    out.width = in.width;
                    out.tuples = q * in.tuples;
                    if (in.cases) out.cases = std::min(*in.cases, out.tuples);
                    out.blocks = blocks_of(out.tuples, out.width);
                    if (over_base) out.own.add(CostComponent::Scan, std::min(in.blocks, 1 + ceil_r(out.tuples / p.F)));
                } else if constexpr (std::is_same_v<T, Project> or std::is_same_v<T, RenameAttr> or
                                     std::is_same_v<T, RenamePrefix>) {
                    NodeCost in = child(n.child, 0);
                    out.tuples = in.tuples;
                    out.cases = in.cases;
                    out.width = in.width;
                    out.blocks = in.blocks;
                } else if constexpr (std::is_same_v<T, DirectlyFollows>) {
                    NodeCost in = child(n.child, 0);
                    if (not in.cases)
                        throw MissingStatsError("no case count (V) known for the input of '" + render(e) + "'");
                    Rational N = in.tuples, V = *in.cases;
                    out.tuples = std::max(Rational(0), Rational(N - V));
                    out.cases = V;
                    out.width = 2 * in.width;
                    out.blocks = blocks_of(out.tuples, out.width);
                    CostParams local = p;
                    local.N = N;
                    local.V = V;
                    local.F = p.F / in.width;
                    Rational size1 = following_pairs(N, V) * 2 / local.F;
                    Rational size2 = indirect_pairs(N, V) * 2 / local.F;
                    bool fits = size1 <= p.M and size2 <= p.M;
                    if (strategy == DfStrategy::Native or V == 0) {
                        out.order = in.blocks;
                    } else {
                        CostEstimate c = composite_df_cost(local);
                        c.components[CostComponent::Join1] -= in.blocks;
                        out.own.add(c);
                        out.order = fits ? in.blocks : in.blocks * (N / V) * (N / V);
                    }
                } else {
                    NodeCost l = child(n.left, 0), r = child(n.right, 1);
                    out.own.add(CostComponent::Other, bnl_cost(l.blocks, r.blocks, p.M) - l.blocks - r.blocks);
                    if constexpr (std::is_same_v<T, Product> or std::is_same_v<T, Join>) {
                        out.tuples = l.tuples * r.tuples;
                        if constexpr (std::is_same_v<T, Join>) out.tuples *= p.Q;
                        out.width = l.width + r.width;
                        out.cases = l.cases;
                    } else {
                        out.width = l.width;
                        if constexpr (std::is_same_v<T, Union>)
                            out.tuples = l.tuples + r.tuples;
                        else if constexpr (std::is_same_v<T, Intersect>)
                            out.tuples = std::min(l.tuples, r.tuples);
                        else
                            out.tuples = l.tuples;
                        out.cases = l.cases;
                    }
                    out.blocks = blocks_of(out.tuples, out.width);
                }
            },
            e.node());
        nodes[slot] = out;
        return slot;
    }
};

} // namespace

PlanEstimate estimate_plan(const Expr &e, const Catalog &cat, const CostParams &p, DfStrategy strategy)
{
    Planner planner{cat, p, strategy, {}};
    NodePath path;
    planner.visit(e, path);
    PlanEstimate out;
    for (auto &n : planner.nodes) out.total.add(n.own);
    out.nodes = std::move(planner.nodes);
    return out;
}

std::string_view to_string(SweepAxis a)
{
    switch (a) {
        case SweepAxis::EventsPerCase: return "events_per_case";
        case SweepAxis::N: return "N";
        case SweepAxis::M: return "M";
        case SweepAxis::Q: return "Q";
    }
    return "?";
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view s)
{
    for (auto a : {SweepAxis::EventsPerCase, SweepAxis::N, SweepAxis::M, SweepAxis::Q})
        if (s == to_string(a)) return a;
    return std::nullopt;
}

std::vector<SweepPoint> sweep(const CostParams &base, SweepAxis axis, const Rational &from, const Rational &to,
                              const Rational &step)
{
    if (step <= 0) throw InvalidArgument("sweep step must be positive");
    if (from > to) throw InvalidArgument("sweep range is empty");
    std::vector<SweepPoint> out;
    for (Rational x = from; x <= to; x += step) {
        CostParams p = base;
        switch (axis) {
            case SweepAxis::EventsPerCase: p.N = p.V * x; break;
            case SweepAxis::N: p.N = x; break;
            case SweepAxis::M: p.M = x; break;
            case SweepAxis::Q:
                p.N = base.N * x;
                p.V = std::min(base.V, p.N);
                break;
        }
        out.push_back({x, composite_df_cost(p)});
    }
    return out;
}

std::vector<std::size_t> detect_jumps(const std::vector<SweepPoint> &points)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 2; i < points.size(); ++i) {
        Rational d = points[i].estimate.total() - points[i - 1].estimate.total();
        Rational prev = points[i - 1].estimate.total() - points[i - 2].estimate.total();
        if (d > 0 and d > 2 * std::max(prev, Rational(0))) out.push_back(i);
    }
    return out;
}

std::pair<double, double> fit_thresholds_events_per_case(const CostParams &p)
{
    double k = to_double(p.M * p.F / p.V);
    double root = std::sqrt(1 + 4 * k);
    return {(1 + root) / 2, (3 + root) / 2};
}

std::string sweep_csv(const std::vector<SweepPoint> &points)
{
    std::ostringstream out;
    out << "x,join1,result1,join2,result2,minus,total\n";
    for (auto &pt : points) {
        out << to_string(pt.x);
        for (auto c : {CostComponent::Join1, CostComponent::Result1, CostComponent::Join2, CostComponent::Result2,
                       CostComponent::Minus})
            out << "," << ceil(pt.estimate.component(c)).str();
        out << "," << pt.estimate.total_blocks().str() << "\n";
    }
    return out.str();
}

} // namespace dfq
