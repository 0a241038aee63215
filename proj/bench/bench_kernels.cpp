#include "dfq/kernels.hpp"
#include "dfq/parser.hpp"

#include "testkit.hpp"

#include <benchmark/benchmark.h>

using namespace dfq;

namespace {

const Relation &log_of(std::size_t cases)
{
    static std::map<std::size_t, Relation> cache;
    auto it = cache.find(cases);
    if (it == cache.end()) it = cache.emplace(cases, testkit::uniform_log(cases, 20, 7).relation).first;
    return it->second;
}

template<bool Parallel>
void df_native(benchmark::State &state)
{
    const Relation &log = log_of(std::size_t(state.range(0)));
    for (auto _ : state) {
        Relation r = Parallel ? kernels::parallel::df_native(log, "case", "time")
                              : kernels::serial::df_native(log, "case", "time");
        benchmark::DoNotOptimize(r.size());
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(log.size()));
}

template<bool Parallel>
void select(benchmark::State &state)
{
    const Relation &log = log_of(std::size_t(state.range(0)));
    Condition c = parse_condition("activity < 4 & time > 10");
    kernels::Counters counters;
    for (auto _ : state) {
        Relation r = Parallel ? kernels::parallel::select(log, c, counters) : kernels::serial::select(log, c, counters);
        benchmark::DoNotOptimize(r.size());
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(log.size()));
}

template<bool Parallel>
void join(benchmark::State &state)
{
    const Relation &log = log_of(std::size_t(state.range(0)));
    Relation d = kernels::prefix(log, "d"), u = kernels::prefix(log, "u");
    Condition c = parse_condition("d.case = u.case & d.time < u.time");
    kernels::Counters counters;
    for (auto _ : state) {
        Relation r = Parallel ? kernels::parallel::join(c, d, u, counters) : kernels::serial::join(c, d, u, counters);
        benchmark::DoNotOptimize(r.size());
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(log.size()));
}

} // namespace

BENCHMARK(df_native<false>)->Name("df_native/serial")->Arg(500)->Arg(5000);
BENCHMARK(df_native<true>)->Name("df_native/parallel")->Arg(500)->Arg(5000);
BENCHMARK(select<false>)->Name("select/serial")->Arg(500)->Arg(5000);
BENCHMARK(select<true>)->Name("select/parallel")->Arg(500)->Arg(5000);
BENCHMARK(join<false>)->Name("join/serial")->Arg(100)->Arg(500);
BENCHMARK(join<true>)->Name("join/parallel")->Arg(100)->Arg(500);

BENCHMARK_MAIN();
