#include "dfq/optimizer.hpp"

#include "dfq/parser.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>

namespace dfq {

std::string_view to_string(OptimizeMode m)
{
    switch (m) {
        case OptimizeMode::Off: return "off";
        case OptimizeMode::Heuristic: return "heuristic";
        case OptimizeMode::Exhaustive: return "exhaustive";
    }
    return "?";
}

std::optional<OptimizeMode> parse_optimize_mode(std::string_view s)
{
    for (auto m : {OptimizeMode::Off, OptimizeMode::Heuristic, OptimizeMode::Exhaustive})
        if (s == to_string(m)) return m;
    return std::nullopt;
}

namespace {

void collect_paths(const Expr &e, NodePath &path, std::vector<NodePath> &out)
{
    out.push_back(path);
    auto kids = e.children();
    for (std::size_t i = 0; i < kids.size(); ++i) {
        path.push_back(i);
        collect_paths(kids[i], path, out);
        path.pop_back();
    }
}

std::vector<NodePath> preorder_paths(const Expr &e)
{
    std::vector<NodePath> out;
    NodePath path;
    collect_paths(e, path, out);
    return out;
}

struct Blocker
{
    std::vector<BlockedRule> *out;
    std::set<std::tuple<RuleId, Direction, NodePath>> seen;

    void add(const RuleSpec &r, const NodePath &p, const std::string &reason)
    {
        if (not out or not seen.emplace(r.id, r.dir, p).second) return;
        out->push_back({r.id, r.dir, p, reason});
    }
};

constexpr std::size_t kGreedyStepLimit = 1000;

struct Candidate
{
    Expr tree;
    std::vector<AppliedRule> steps;
};

} // namespace

std::pair<Expr, std::vector<AppliedRule>> greedy_rewrite(const Expr &e, const Catalog &cat,
                                                        std::vector<BlockedRule> *blocked)
{
    Blocker blocker{blocked, {}};
    Expr cur = e;
    std::vector<AppliedRule> steps;
    while (steps.size() < kGreedyStepLimit) {
        bool changed = false;
        for (auto &path : preorder_paths(cur)) {
            for (auto &r : greedy_rules()) {
                try {
                    if (auto next = try_apply_rule(r.id, r.dir, cur, path, cat)) {
                        cur = *next;
                        steps.push_back({r.id, r.dir, path});
                        changed = true;
                        break;
                    }
                } catch (const SideConditionUnverified &err) {
                    blocker.add(r, path, err.fact());
                }
            }
            if (changed) break;
        }
        if (not changed) break;
    }
    return {cur, steps};
}

PlanChoice optimize(const Expr &e, const Catalog &cat, const OptimizerConfig &cfg)
{
    PlanChoice out{e, e, {}, {}, {}, {}, false, true, {}};
    auto estimate = [&](const Expr &x) { return estimate_plan(x, cat, cfg.params, cfg.strategy); };
    try {
        out.est_original = estimate(e);
    } catch (const MissingStatsError &err) {
        out.costed = false;
        out.cost_error = err.what();
    }
    if (cfg.mode == OptimizeMode::Off) {
        out.est_chosen = out.est_original;
        return out;
    }

    std::vector<Candidate> candidates{{e, {}}};
    if (cfg.mode == OptimizeMode::Heuristic) {
        auto [tree, steps] = greedy_rewrite(e, cat, &out.blocked);
        candidates.push_back({tree, steps});
    } else {
        Blocker blocker{&out.blocked, {}};
        std::unordered_set<std::string> seen{render(e)};
        std::deque<std::size_t> queue{0};
        std::size_t visits = 0;
        while (not queue.empty() and not out.budget_exhausted) {
            std::size_t idx = queue.front();
            queue.pop_front();
            for (auto &path : preorder_paths(candidates[idx].tree)) {
                if (++visits > cfg.budget) {
                    out.budget_exhausted = true;
                    break;
                }
                for (auto &r : all_rules()) {
                    std::optional<Expr> next;
                    try {
                        next = try_apply_rule(r.id, r.dir, candidates[idx].tree, path, cat);
                    } catch (const SideConditionUnverified &err) {
                        blocker.add(r, path, err.fact());
                    }
                    if (not next or not seen.insert(render(*next)).second) continue;
                    auto steps = candidates[idx].steps;
                    steps.push_back({r.id, r.dir, path});
                    candidates.push_back({*next, std::move(steps)});
                    queue.push_back(candidates.size() - 1);
                }
            }
        }
        if (out.budget_exhausted) {
            auto [tree, steps] = greedy_rewrite(e, cat, nullptr);
            candidates.push_back({tree, steps});
        }
    }
    if (not out.costed) {
        out.est_chosen = out.est_original;
        return out;
    }

    std::size_t best = 0;
    PlanEstimate best_est = out.est_original;
    Rational best_total = best_est.total.total();
    std::size_t best_nodes = node_count(e);
    std::string best_render = render(e);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        PlanEstimate est;
        try {
            est = estimate(candidates[i].tree);
        } catch (const MissingStatsError &) {
            continue;
        }
        Rational total = est.total.total();
        std::size_t nodes = node_count(candidates[i].tree);
        std::string text = render(candidates[i].tree);
        if (std::tie(total, nodes, text) < std::tie(best_total, best_nodes, best_render)) {
            best = i;
            best_est = std::move(est);
            best_total = total;
            best_nodes = nodes;
            best_render = std::move(text);
        }
    }
    out.chosen = candidates[best].tree;
    out.applied_rules = candidates[best].steps;
    out.est_chosen = std::move(best_est);
    return out;
}

} // namespace dfq
