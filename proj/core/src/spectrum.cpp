#include "ringsphere/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "ringsphere/observables.hpp"

namespace ringsphere {

namespace {

double convention_factor(Convention c) {
    return c == Convention::half ? 0.5 : 1.0;
}

struct StateKey {
    double energy;
    int m;
    int n;
    bool operator<(const StateKey& o) const {
        if (energy != o.energy) return energy < o.energy;
        if (m != o.m) return m < o.m;
        return n < o.n;
    }
};

StateKey key_of(const StateRecord& r) {
    return StateKey{r.energy, r.qn.m, r.qn.n};
}

}  // namespace

double eval_energy(const ModelParams& params, const QuantumNumbers& qn) {
    if (params.geometry.flat_limit)
        throw std::invalid_argument("eval_energy needs finite a; use eval_energy_flat");
    const auto d = derive_state_quantities(params, qn);
    const double a = params.geometry.a;
    const double mp = m_plus_nu(params, qn.m);
    const double nh = qn.n + 0.5;
    const double curv = (nh * nh + nh * d.M + 0.5 * mp * mp) / (2.0 * a * a);
    const double osc = d.omega_m * (nh + 0.5 * d.M);
    const double field = convention_factor(params.convention) * d.omega_c * mp;
    return curv + osc + field - 0.25 * d.omega0 * d.omega0 * d.rho0 * d.rho0;
}

double eval_energy_flat(const ModelParams& params, const QuantumNumbers& qn) {
    if (!params.geometry.flat_limit)
        throw std::invalid_argument("eval_energy_flat requires flat_limit geometry");
    const auto d = derive_state_quantities(params, qn);
    const double mp = m_plus_nu(params, qn.m);
    const double osc = d.omega_m * (qn.n + 0.5 + 0.5 * d.M);
    const double field = convention_factor(params.convention) * d.omega_c * mp;
    const auto& c = params.confinement;
    return osc + field - 2.0 * std::sqrt(c.lambda1 * c.lambda2);
}

RadialBound radial_bound(const ModelParams& params, int m) {
    if (params.geometry.flat_limit)
        throw std::invalid_argument("radial_bound requires finite a");
    const auto d = derive_state_quantities(params, QuantumNumbers{0, m});
    RadialBound b;
    const double a = params.geometry.a;
    b.n_sup = a * a * d.omega_m - 0.5 * d.M - 0.5;
    const double c = std::ceil(b.n_sup) - 1.0;
    b.n_max = c < 0.0 ? -1 : static_cast<int>(c);
    return b;
}

double landau_sphere_energy(double a, double b, const QuantumNumbers& qn) {
    ModelParams params;
    params.geometry.a = a;
    params.fields.b = b;
    params.convention = Convention::half;
    return eval_energy(params, qn);
}

namespace {

StateRecord make_record(const ModelParams& params, const QuantumNumbers& qn,
                        double energy) {
    const auto d = derive_state_quantities(params, qn);
    StateRecord r;
    r.qn = qn;
    r.energy = energy;
    r.M = d.M;
    r.omega_m = d.omega_m;
    r.rho_m = d.rho_m;
    r.moment = state_moment(params, qn);
    if (d.M > 0.0) {
        r.current = state_current(params, qn);
    } else {
        r.flags = "M0";  // closed-form current undefined at M = 0
    }
    return r;
}

}  // namespace

SpectrumTable enumerate_states(const ModelParams& params,
                               const EnumerationOptions& opts) {
    if (!params.valid()) throw std::invalid_argument("invalid model parameters");
    if (params.geometry.flat_limit)
        throw std::invalid_argument("enumerate_states requires finite a");
    if (opts.max_states == 0)
        throw std::invalid_argument("enumerate_states: max_states must be >= 1");
    if (opts.m_min && opts.m_max && *opts.m_min > *opts.m_max)
        throw std::invalid_argument("enumerate_states: empty m window");

    using Entry = std::pair<StateKey, StateRecord>;
    auto cmp = [](const Entry& a, const Entry& b) { return a.first < b.first; };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);

    const auto worst = [&]() -> StateKey {
        if (heap.size() < opts.max_states)
            return StateKey{std::numeric_limits<double>::infinity(), 0, 0};
        return heap.top().first;
    };

    auto consider = [&](StateRecord&& r) {
        Entry e{key_of(r), std::move(r)};
        if (heap.size() < opts.max_states) {
            heap.push(std::move(e));
        } else if (e.first < heap.top().first) {
            heap.pop();
            heap.push(std::move(e));
        }
    };

    // Walk one angular channel; n is enumerated in increasing order, and
    // E is strictly increasing in n, so the walk can stop as soon as the
    // heap is full and the energy exceeds the current worst key.
    auto walk_channel = [&](int m) -> double {
        int n_limit = std::numeric_limits<int>::max() - 1;
        if (opts.policy == BoundPolicy::paper) {
            n_limit = radial_bound(params, m).n_max;
        } else {
            // Relaxed policy: every truncated solution with omega_m > 0 has
            // a finite normalization integral on the (compact) sphere, so n
            // is bounded only by n_cap / max_states pruning.
            const auto d = derive_state_quantities(params, QuantumNumbers{0, m});
            if (!(d.omega_m > 0.0)) n_limit = -1;
        }
        if (opts.n_cap) n_limit = std::min(n_limit, *opts.n_cap);

        double channel_min = std::numeric_limits<double>::infinity();
        for (int n = 0; n <= n_limit; ++n) {
            const QuantumNumbers qn{n, m};
            const double e = eval_energy(params, qn);
            if (n == 0) channel_min = e;
            const StateKey w = worst();
            if (heap.size() >= opts.max_states && e > w.energy) break;
            consider(make_record(params, qn, e));
        }
        return channel_min;
    };

    const bool auto_lo = !opts.m_min.has_value();
    const bool auto_hi = !opts.m_max.has_value();
    int lo = opts.m_min.value_or(-4);
    int hi = opts.m_max.value_or(4);
    if (auto_hi && hi < lo) hi = lo;
    if (auto_lo && lo > hi) lo = hi;

    constexpr int hard_cap = 100000;
    for (int m = lo; m <= hi; ++m) walk_channel(m);

    // Auto window growth: a side keeps expanding until a stretch of
    // channels contributes nothing, i.e. the boundary can no longer reach
    // the retained energies.  The stretch guards against isolated empty
    // channels in the interior of the spectrum.
    constexpr int quiet_needed = 12;
    if (auto_lo) {
        int quiet = 0;
        while (quiet < quiet_needed) {
            --lo;
            if (-lo > hard_cap)
                throw std::runtime_error("enumerate_states: m window failed to close (m_min)");
            const double cmin = walk_channel(lo);
            const bool useful = std::isfinite(cmin) && cmin <= worst().energy;
            quiet = useful ? 0 : quiet + 1;
        }
    }
    if (auto_hi) {
        int quiet = 0;
        while (quiet < quiet_needed) {
            ++hi;
            if (hi > hard_cap)
                throw std::runtime_error("enumerate_states: m window failed to close (m_max)");
            const double cmin = walk_channel(hi);
            const bool useful = std::isfinite(cmin) && cmin <= worst().energy;
            quiet = useful ? 0 : quiet + 1;
        }
    }

    SpectrumTable table;
    table.params = params;
    table.states.reserve(heap.size());
    while (!heap.empty()) {
        table.states.push_back(heap.top().second);
        heap.pop();
    }
    std::reverse(table.states.begin(), table.states.end());
    return table;
}

}  // namespace ringsphere
