#include "dfq/evaluator.hpp"

#include "dfq/kernels.hpp"
#include "dfq/schema_inference.hpp"

#include <memory>

namespace dfq {

std::string_view to_string(DfStrategy s) { return s == DfStrategy::Native ? "native" : "composite"; }

namespace {

using RelPtr = std::shared_ptr<const Relation>;

class Evaluator
{
    const Catalog *cat_;
    EvalConfig cfg_;
    EvalMetrics *metrics_;
    kernels::Counters counters_;
    struct Memo
    {
        Expr keep_alive;
        RelPtr result;
    };
    std::map<const void *, Memo> memo_;

    void record(const NodePath &path, const Relation &r, bool root)
    {
        if (not metrics_) return;
        metrics_->node_cardinalities.insert_or_assign(to_string(path), r.size());
        if (not root) metrics_->intermediate_tuples_peak = std::max<std::uint64_t>(metrics_->intermediate_tuples_peak, r.size());
    }

    bool serial() const { return cfg_.kernels == KernelSet::Serial; }

    Relation select(const Relation &r, const Condition &c)
    {
        return serial() ? kernels::serial::select(r, c, counters_) : kernels::parallel::select(r, c, counters_);
    }
    Relation product(const Relation &l, const Relation &r)
    {
        return serial() ? kernels::serial::product(l, r) : kernels::parallel::product(l, r);
    }
    Relation join(const Condition &c, const Relation &l, const Relation &r)
    {
        return serial() ? kernels::serial::join(c, l, r, counters_) : kernels::parallel::join(c, l, r, counters_);
    }

    Relation composite(const DirectlyFollows &n, RelPtr input, NodePath &path)
    {
        Expr placeholder = Expr::base("input");
        memo_.insert_or_assign(placeholder.identity(), Memo{placeholder, input});
        Expr expanded = expand_df(Expr::df(n.case_attr, n.time_attr, placeholder), input->schema().names());
        return *eval_children_of(expanded, path);
    }

    RelPtr eval_children_of(const Expr &e, NodePath &path)
    {
        if (auto it = memo_.find(e.identity()); it != memo_.end()) return it->second.result;
        auto child = [&](const Expr &c, std::size_t i) {
            path.push_back(i);
            RelPtr r = eval(c, path);
            path.pop_back();
            return r;
        };
        Relation out = std::visit(
            [&](auto &n) -> Relation {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, BaseRel>) {
                    const Relation &r = cat_->relation(n.name);
                    if (metrics_) metrics_->tuples_read += r.size();
                    return r;
                } else if constexpr (std::is_same_v<T, Select>) {
                    return select(*child(n.child, 0), n.cond);
                } else if constexpr (std::is_same_v<T, Project>) {
                    return kernels::project(*child(n.child, 0), n.attrs);
                } else if constexpr (std::is_same_v<T, RenameAttr>) {
                    return kernels::rename(*child(n.child, 0), n.from, n.to);
                } else if constexpr (std::is_same_v<T, RenamePrefix>) {
                    return kernels::prefix(*child(n.child, 0), n.prefix);
                } else if constexpr (std::is_same_v<T, Product>) {
                    RelPtr l = child(n.left, 0), r = child(n.right, 1);
                    return product(*l, *r);
                } else if constexpr (std::is_same_v<T, Join>) {
                    RelPtr l = child(n.left, 0), r = child(n.right, 1);
                    return join(n.cond, *l, *r);
                } else if constexpr (std::is_same_v<T, Union>) {
                    RelPtr l = child(n.left, 0), r = child(n.right, 1);
                    return kernels::set_union(*l, *r);
                } else if constexpr (std::is_same_v<T, Intersect>) {
                    RelPtr l = child(n.left, 0), r = child(n.right, 1);
                    return kernels::set_intersect(*l, *r);
                } else if constexpr (std::is_same_v<T, Minus>) {
                    RelPtr l = child(n.left, 0), r = child(n.right, 1);
                    return kernels::set_minus(*l, *r);
                } else {
                    RelPtr in = child(n.child, 0);
                    if (cfg_.df_strategy == DfStrategy::Composite) return composite(n, in, path);
                    return serial() ? kernels::serial::df_native(*in, n.case_attr, n.time_attr)
                                    : kernels::parallel::df_native(*in, n.case_attr, n.time_attr);
                }
            },
            e.node());
        auto result = std::make_shared<const Relation>(std::move(out));
        memo_.insert_or_assign(e.identity(), Memo{e, result});
        return result;
    }

  public:
    Evaluator(const Catalog &cat, const EvalConfig &cfg, EvalMetrics *metrics)
        : cat_(&cat)
        , cfg_(cfg)
        , metrics_(cfg.collect_metrics ? metrics : nullptr)
    { }

    RelPtr eval(const Expr &e, NodePath &path)
    {
        bool seen = memo_.contains(e.identity());
        RelPtr r = eval_children_of(e, path);
        if (not seen) record(path, *r, path.empty());
        return r;
    }

    RelPtr bind_and_eval(const Expr &e, const Expr &leaf, RelPtr input)
    {
        memo_.insert_or_assign(leaf.identity(), Memo{leaf, std::move(input)});
        NodePath path;
        return eval(e, path);
    }

    void finish()
    {
        if (metrics_) metrics_->comparisons += counters_.comparisons;
    }
};

} // namespace

Relation evaluate(const Expr &e, const Catalog &cat, const EvalConfig &cfg, EvalMetrics *metrics)
{
    infer_schema(e, cat);
    Evaluator ev(cat, cfg, metrics);
    NodePath path;
    RelPtr r = ev.eval(e, path);
    ev.finish();
    return *r;
}

Relation evaluate_df_native(const Relation &log, const std::string &c, const std::string &t, KernelSet kernels)
{
    return kernels == KernelSet::Serial ? kernels::serial::df_native(log, c, t)
                                        : kernels::parallel::df_native(log, c, t);
}

Relation evaluate_df_composite(const Relation &log, const std::string &c, const std::string &t, KernelSet kernels,
                               EvalMetrics *metrics)
{
    log.schema().index_of(c);
    log.schema().index_of(t);
    Catalog empty;
    EvalConfig cfg{DfStrategy::Composite, metrics != nullptr, kernels};
    Evaluator ev(empty, cfg, metrics);
    Expr leaf = Expr::base("input");
    Expr expanded = expand_df(Expr::df(c, t, leaf), log.schema().names());
    RelPtr r = ev.bind_and_eval(expanded, leaf, std::make_shared<const Relation>(log));
    ev.finish();
    return *r;
}

} // namespace dfq
