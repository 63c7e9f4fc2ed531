#include "mcomm/ssa.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "mcomm/errors.hpp"

namespace mcomm {

namespace {

/// Uniform in (0, 1) from the top 53 bits; identical on every standard library.
double open_uniform(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

class DirectMethod {
   public:
    DirectMethod(const LinkModel& link, double c, std::span<const std::int64_t> initial, std::uint64_t seed)
        : rng_(seed), state_(initial.begin(), initial.end()) {
        if (!(c >= 0.0) || !std::isfinite(c)) throw ValidationError("emission rate c must be >= 0");
        if (state_.size() != link.dim()) throw ValidationError("initial state has wrong dimension");
        for (auto v : state_)
            if (v < 0) throw ValidationError("initial state must be nonnegative");

        events_ = link.events;
        if (c > 0.0) {
            std::vector<int> q(link.dim(), 0);
            q[link.input_index] = 1;
            events_.push_back(zero_order_event(std::move(q), c, "emit"));
        }

        const auto n_species = link.dim();
        std::vector<std::vector<std::size_t>> readers(n_species);
        changes_.resize(events_.size());
        for (std::size_t j = 0; j < events_.size(); ++j) {
            for (auto s : events_[j].rate_dependencies()) readers[s].push_back(j);
            for (std::size_t s = 0; s < events_[j].stoich.size(); ++s)
                if (events_[j].stoich[s] != 0) changes_[j].emplace_back(s, events_[j].stoich[s]);
        }
        dependents_.resize(events_.size());
        for (std::size_t j = 0; j < events_.size(); ++j) {
            auto& deps = dependents_[j];
            for (const auto& [s, dq] : changes_[j]) deps.insert(deps.end(), readers[s].begin(), readers[s].end());
            std::sort(deps.begin(), deps.end());
            deps.erase(std::unique(deps.begin(), deps.end()), deps.end());
        }
        propensity_.resize(events_.size());
        for (std::size_t j = 0; j < events_.size(); ++j) propensity_[j] = evaluate(j);
    }

    const std::vector<std::int64_t>& state() const { return state_; }

    /// Advances until t_end or absorption. `before_event(t)` sees the state
    /// prior to an event at time t; `after_event(t)` sees the updated state.
    template <typename Before, typename After>
    void run(double t_end, Before&& before_event, After&& after_event) {
        double t = 0.0;
        for (;;) {
            double a0 = 0.0;
            for (double a : propensity_) a0 += a;
            if (!(a0 > 0.0)) return;
            t += -std::log(open_uniform(rng_)) / a0;
            if (t > t_end) return;

            const double target = open_uniform(rng_) * a0;
            std::size_t chosen = propensity_.size();
            double acc = 0.0;
            for (std::size_t j = 0; j < propensity_.size(); ++j) {
                if (propensity_[j] <= 0.0) continue;
                chosen = j;
                acc += propensity_[j];
                if (target < acc) break;
            }

            before_event(t);
            for (const auto& [s, dq] : changes_[chosen]) {
                state_[s] += dq;
                if (state_[s] < 0) fail("species count went negative", chosen);
            }
            for (auto j : dependents_[chosen]) propensity_[j] = evaluate(j);
            after_event(t);
        }
    }

   private:
    double evaluate(std::size_t j) const {
        const double w = events_[j].rate(std::span<const std::int64_t>(state_));
        if (!(w >= 0.0)) fail("negative or undefined propensity", j);
        return w;
    }

    [[noreturn]] void fail(const char* what, std::size_t event) const {
        std::ostringstream msg;
        msg << "SSA aborted: " << what << " (event '" << events_[event].label << "'); state = [";
        for (std::size_t i = 0; i < state_.size(); ++i) msg << (i ? ", " : "") << state_[i];
        msg << "]";
        throw NumericalError(msg.str());
    }

    std::mt19937_64 rng_;
    std::vector<std::int64_t> state_;
    std::vector<JumpEvent> events_;
    std::vector<std::vector<std::pair<std::size_t, int>>> changes_;
    std::vector<std::vector<std::size_t>> dependents_;
    std::vector<double> propensity_;
};

void check_sample_times(std::span<const double> times) {
    if (times.empty()) throw ValidationError("sample times must not be empty");
    if (!(times.front() >= 0.0)) throw ValidationError("sample times must be >= 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw ValidationError("sample times must be strictly increasing");
}

SampledRun sample_one(const LinkModel& link, double c, std::span<const double> times, std::uint64_t seed,
                      std::span<const std::int64_t> initial) {
    DirectMethod sim(link, c, initial, seed);
    SampledRun out;
    out.values.reserve(times.size());
    std::size_t next = 0;
    const auto record = [&] {
        const auto& s = sim.state();
        out.values.emplace_back(s.begin(), s.end());
        ++next;
    };
    sim.run(
        times.back(),
        [&](double t) {
            while (next < times.size() && times[next] < t) record();
        },
        [](double) {});
    while (next < times.size()) record();
    return out;
}

/// Pairwise sum of f(run) over runs [lo, hi).
template <typename F>
double pairwise(std::size_t lo, std::size_t hi, const F& f) {
    if (hi - lo == 1) return f(lo);
    if (hi - lo == 2) return f(lo) + f(lo + 1);
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise(lo, mid, f) + pairwise(mid, hi, f);
}

}  // namespace

Trajectory ssa_run(const LinkModel& link, double c, double t_end, std::uint64_t seed,
                   std::span<const std::int64_t> initial_state) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("t_end must be > 0");
    DirectMethod sim(link, c, initial_state, seed);
    Trajectory traj;
    traj.seed = seed;
    traj.t_end = t_end;
    traj.times.push_back(0.0);
    traj.states.push_back(sim.state());
    sim.run(
        t_end, [](double) {},
        [&](double t) {
            traj.times.push_back(t);
            traj.states.push_back(sim.state());
        });
    return traj;
}

std::vector<SampledRun> sample_runs(const LinkModel& link, double c, std::span<const double> sample_times,
                                    std::size_t run_count, std::uint64_t base_seed,
                                    std::span<const std::int64_t> initial_state, unsigned threads) {
    if (run_count < 1) throw ValidationError("run count must be >= 1");
    check_sample_times(sample_times);
    if (!(sample_times.back() > 0.0)) throw ValidationError("sampling horizon must be > 0");

    std::vector<SampledRun> runs(run_count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= run_count) return;
            try {
                runs[i] = sample_one(link, c, sample_times, base_seed + i, initial_state);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = run_count;
                return;
            }
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(run_count)));
    {
        std::vector<std::jthread> pool;
        for (unsigned k = 1; k < n_threads; ++k) pool.emplace_back(worker);
        worker();
    }
    if (error) std::rethrow_exception(error);
    return runs;
}

EnsembleStats summarize(std::span<const double> sample_times, std::span<const SampledRun> runs) {
    if (runs.empty()) throw ValidationError("no runs to summarize");
    EnsembleStats stats;
    stats.sample_times.assign(sample_times.begin(), sample_times.end());
    stats.run_count = runs.size();
    const auto n_runs = runs.size();
    const auto n_times = sample_times.size();
    const auto dim = runs.front().values.empty() ? 0 : runs.front().values.front().size();
    stats.mean.assign(n_times, std::vector<double>(dim, 0.0));
    stats.variance.assign(n_times, std::vector<double>(dim, 0.0));
    for (std::size_t t = 0; t < n_times; ++t) {
        for (std::size_t s = 0; s < dim; ++s) {
            const double mu = pairwise(0, n_runs, [&](std::size_t r) { return runs[r].values[t][s]; }) / n_runs;
            stats.mean[t][s] = mu;
            if (n_runs > 1) {
                const double ss = pairwise(0, n_runs, [&](std::size_t r) {
                    const double dv = runs[r].values[t][s] - mu;
                    return dv * dv;
                });
                stats.variance[t][s] = ss / static_cast<double>(n_runs - 1);
            }
        }
    }
    return stats;
}

EnsembleStats ensemble_mean(const LinkModel& link, double c, std::span<const double> sample_times,
                            std::size_t run_count, std::uint64_t base_seed,
                            std::span<const std::int64_t> initial_state, unsigned threads) {
    const auto runs = sample_runs(link, c, sample_times, run_count, base_seed, initial_state, threads);
    return summarize(sample_times, runs);
}

WindowEstimate window_mean(std::span<const double> sample_times, std::span<const SampledRun> runs,
                           std::size_t species, double t_from) {
    if (runs.empty()) throw ValidationError("no runs");
    std::vector<std::size_t> idx;
    for (std::size_t t = 0; t < sample_times.size(); ++t)
        if (sample_times[t] >= t_from) idx.push_back(t);
    if (idx.empty()) throw ValidationError("averaging window contains no sample times");

    std::vector<double> per_run(runs.size());
    for (std::size_t r = 0; r < runs.size(); ++r) {
        double sum = 0.0;
        for (auto t : idx) sum += runs[r].values[t][species];
        per_run[r] = sum / static_cast<double>(idx.size());
    }
    const auto n = per_run.size();
    WindowEstimate est;
    est.samples_per_run = idx.size();
    est.mean = pairwise(0, n, [&](std::size_t r) { return per_run[r]; }) / n;
    if (n > 1) {
        const double ss = pairwise(0, n, [&](std::size_t r) { return (per_run[r] - est.mean) * (per_run[r] - est.mean); });
        est.std_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return est;
}

}  // namespace mcomm
