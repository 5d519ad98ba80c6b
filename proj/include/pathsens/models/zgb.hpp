#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pathsens/accumulate.hpp"
#include "pathsens/params.hpp"
#include "pathsens/rng.hpp"

namespace pathsens::models {

// Ziff-Gulari-Barshad CO oxidation on a periodic L x L lattice.
// Spins: -1 = CO, 0 = vacant, +1 = O.  theta = [k1, k2].
// Per-site events:
//   1: CO adsorption on a vacant site,        rate k1
//   2: O2 adsorption on a vacant pair,        rate (1-k1) * (#vacant nn / 4)
//   3: CO(j) + O(nn) -> CO2, both desorb,     rate k2 * (#O nn / 4)
//   4: O(j) + CO(nn) -> CO2, both desorb,     rate k2 * (#CO nn / 4)

struct ZgbLattice {
    int size = 0;
    std::vector<std::int8_t> spin;  // row-major, length size*size

    ZgbLattice() = default;
    explicit ZgbLattice(int L, std::int8_t fill = 0)
        : size(L), spin(static_cast<std::size_t>(L) * L, fill) {
        if (L < 2) throw std::invalid_argument("zgb: lattice size must be >= 2");
    }

    std::size_t sites() const { return spin.size(); }

    std::array<std::size_t, 4> neighbors(std::size_t j) const {
        const std::size_t L = static_cast<std::size_t>(size);
        const std::size_t x = j % L;
        const std::size_t y = j / L;
        return {
            y * L + (x + 1) % L,
            y * L + (x + L - 1) % L,
            ((y + 1) % L) * L + x,
            ((y + L - 1) % L) * L + x,
        };
    }

    std::uint64_t digest() const {
        std::uint64_t h = 1469598103934665603ull;  // FNV-1a
        for (std::int8_t s : spin) {
            h ^= static_cast<std::uint8_t>(s);
            h *= 1099511628211ull;
        }
        return h;
    }
};

inline void zgb_check_theta(const ParameterVector& theta) {
    if (theta.size() != 2) throw std::invalid_argument("zgb: theta must be [k1, k2]");
    if (theta[0] <= 0.0 || theta[0] >= 1.0)
        throw std::invalid_argument("zgb: k1 must lie in (0,1)");
    if (theta[1] <= 0.0) throw std::invalid_argument("zgb: k2 must be > 0");
}

inline std::array<double, 4> zgb_site_rates(const ZgbLattice& lat, std::size_t j,
                                            double k1, double k2) {
    const int s = lat.spin[j];
    int n_vac = 0, n_o = 0, n_co = 0;
    for (std::size_t nb : lat.neighbors(j)) {
        const int sn = lat.spin[nb];
        n_vac += (sn == 0);
        n_o += (sn == 1);
        n_co += (sn == -1);
    }
    std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};
    if (s == 0) {
        c[0] = k1;
        c[1] = (1.0 - k1) * n_vac / 4.0;
    } else if (s == -1) {
        c[2] = k2 * n_o / 4.0;
    } else {
        c[3] = k2 * n_co / 4.0;
    }
    return c;
}

// Executes event k at site j, consuming exactly one rng draw when a reaction
// partner is involved.  Returns the partner site or SIZE_MAX.
inline std::size_t zgb_execute(ZgbLattice& lat, std::size_t j, std::size_t event,
                               RngStream& rng) {
    auto pick_neighbor = [&](std::int8_t wanted) -> std::size_t {
        std::array<std::size_t, 4> eligible{};
        std::size_t n = 0;
        for (std::size_t nb : lat.neighbors(j))
            if (lat.spin[nb] == wanted) eligible[n++] = nb;
        if (n == 0)
            throw std::logic_error("zgb: event demanded a neighbor that does not exist");
        return eligible[rng.uniform_below(n)];
    };
    switch (event) {
        case 0:  // CO adsorption
            lat.spin[j] = -1;
            return static_cast<std::size_t>(-1);
        case 1: {  // O2 adsorption on j + vacant neighbor
            const std::size_t nb = pick_neighbor(0);
            lat.spin[j] = 1;
            lat.spin[nb] = 1;
            return nb;
        }
        case 2: {  // CO(j) + O(nb) -> CO2
            const std::size_t nb = pick_neighbor(1);
            lat.spin[j] = 0;
            lat.spin[nb] = 0;
            return nb;
        }
        case 3: {  // O(j) + CO(nb) -> CO2
            const std::size_t nb = pick_neighbor(-1);
            lat.spin[j] = 0;
            lat.spin[nb] = 0;
            return nb;
        }
        default:
            throw std::invalid_argument("zgb: event index out of range");
    }
}

// Generic jump-model view with the full 4*L^2 event catalog.  Suitable for
// small lattices and cross-checks; production runs use ZgbSimulator below.
class ZgbModel {
public:
    using State = ZgbLattice;

    explicit ZgbModel(int L) : size_(L) {}

    std::size_t n_params() const { return 2; }

    bool admissible(const ParameterVector& theta) const {
        return theta.size() == 2 && theta[0] > 0.0 && theta[0] < 1.0 && theta[1] > 0.0;
    }

    void rates(const State& lat, const ParameterVector& theta, std::vector<double>& out) const {
        zgb_check_theta(theta);
        out.assign(4 * lat.sites(), 0.0);
        for (std::size_t j = 0; j < lat.sites(); ++j) {
            const auto c = zgb_site_rates(lat, j, theta[0], theta[1]);
            for (std::size_t k = 0; k < 4; ++k) out[4 * j + k] = c[k];
        }
    }

    void apply(State& lat, std::size_t event, RngStream& rng) const {
        zgb_execute(lat, event / 4, event % 4, rng);
    }

    // d c / d theta; every event rate touches exactly one parameter
    void rate_grads(const State& lat, const ParameterVector& theta, std::size_t event,
                    std::vector<double>& out) const {
        const auto c = zgb_site_rates(lat, event / 4, theta[0], theta[1]);
        const std::size_t k = event % 4;
        out.assign(2, 0.0);
        switch (k) {
            case 0: out[0] = c[0] / theta[0]; break;
            case 1: out[0] = -c[1] / (1.0 - theta[0]); break;
            default: out[1] = c[k] / theta[1]; break;
        }
    }

    double digest(const State& lat) const {
        return static_cast<double>(lat.digest() >> 11);
    }

    int lattice_size() const { return size_; }

private:
    int size_;
};

// Per-state sufficient statistics of the lattice rate catalog:
//   r1  = sum_j c1(j)   (proportional to k1)
//   r2  = sum_j c2(j)   (proportional to 1-k1)
//   r34 = sum_j c3(j)+c4(j)  (proportional to k2)
// RER and FIM samples for any perturbation are functions of these three
// numbers, which is what makes desk-scale lattices tractable.
struct ZgbAggregates {
    double r1 = 0.0;
    double r2 = 0.0;
    double r34 = 0.0;

    double lambda() const { return r1 + r2 + r34; }

    // sum_jk c log(c/c~) - (lambda - lambda~) for theta~ = [k1+e1, k2+e2]
    double rer_sample(double k1, double k2, double e1, double e2) const {
        const double k1p = k1 + e1;
        const double k2p = k2 + e2;
        const double log_term = r1 * std::log(k1 / k1p) +
                                r2 * std::log((1.0 - k1) / (1.0 - k1p)) +
                                r34 * std::log(k2 / k2p);
        const double lambda_p =
            r1 * (k1p / k1) + r2 * ((1.0 - k1p) / (1.0 - k1)) + r34 * (k2p / k2);
        return log_term - (lambda() - lambda_p);
    }

    // every per-term FIM contribution is diagonal in (k1, k2)
    double fim_sample_11(double k1) const {
        return r1 / (k1 * k1) + r2 / ((1.0 - k1) * (1.0 - k1));
    }
    double fim_sample_22(double k2) const { return r34 / (k2 * k2); }
};

// SSA driver with an incrementally maintained per-site rate cache.  Event
// selection is a two-level linear cumulative scan (sites, then the 4 events
// of the chosen site); the aggregate sums are refreshed periodically to keep
// floating-point drift out of long runs.
class ZgbSimulator {
public:
    ZgbSimulator(ZgbLattice initial, double k1, double k2)
        : lat_(std::move(initial)), k1_(k1), k2_(k2),
          site_rates_(lat_.sites()), site_total_(lat_.sites(), 0.0) {
        zgb_check_theta(ParameterVector({k1, k2}, {"k1", "k2"}));
        full_refresh();
    }

    struct RunStats {
        std::size_t jumps = 0;
        double time = 0.0;
    };

    // hook(const ZgbAggregates&, double dt) is called for every post-burn-in
    // jump, before the jump executes, with the waiting time as weight.
    template <class Hook>
    RunStats run(RngStream& rng, double burn_in, double horizon, Hook&& hook) {
        RunStats stats;
        double t = 0.0;
        while (t < horizon) {
            const double lambda = agg_.lambda();
            if (lambda <= 0.0)
                throw std::runtime_error("zgb: absorbing lattice configuration reached");
            const double dt = rng.exponential(lambda);
            const std::size_t ev = select_event(rng.uniform() * lambda);
            if (t >= burn_in) hook(static_cast<const ZgbAggregates&>(agg_), dt);
            execute(ev, rng);
            t += dt;
            ++stats.jumps;
            if ((stats.jumps & 0xfffu) == 0) refresh_sums();
        }
        stats.time = t;
        return stats;
    }

    const ZgbLattice& lattice() const { return lat_; }
    const ZgbAggregates& aggregates() const { return agg_; }

private:
    std::size_t select_event(double target) const {
        double acc = 0.0;
        std::size_t last_positive = 0;
        for (std::size_t j = 0; j < site_total_.size(); ++j) {
            if (site_total_[j] <= 0.0) continue;
            acc += site_total_[j];
            last_positive = j;
            if (acc >= target) {
                double sacc = acc - site_total_[j];
                for (std::size_t k = 0; k < 4; ++k) {
                    sacc += site_rates_[j][k];
                    if (site_rates_[j][k] > 0.0 && sacc >= target) return 4 * j + k;
                }
                break;
            }
        }
        // numerical slack: fall back to the last positive-rate site
        const std::size_t j = last_positive;
        for (std::size_t k = 4; k-- > 0;)
            if (site_rates_[j][k] > 0.0) return 4 * j + k;
        throw std::runtime_error("zgb: event selection failed");
    }

    void execute(std::size_t ev, RngStream& rng) {
        const std::size_t j = ev / 4;
        const std::size_t partner = zgb_execute(lat_, j, ev % 4, rng);
        update_site_and_neighbors(j);
        if (partner != static_cast<std::size_t>(-1)) update_site_and_neighbors(partner);
    }

    void update_site_and_neighbors(std::size_t j) {
        recompute_site(j);
        for (std::size_t nb : lat_.neighbors(j)) recompute_site(nb);
    }

    void recompute_site(std::size_t j) {
        const auto c = zgb_site_rates(lat_, j, k1_, k2_);
        const auto& old = site_rates_[j];
        agg_.r1 += c[0] - old[0];
        agg_.r2 += c[1] - old[1];
        agg_.r34 += c[2] + c[3] - old[2] - old[3];
        site_rates_[j] = c;
        site_total_[j] = c[0] + c[1] + c[2] + c[3];
    }

    void refresh_sums() {
        KahanSum r1, r2, r34;
        for (const auto& c : site_rates_) {
            r1.add(c[0]);
            r2.add(c[1]);
            r34.add(c[2] + c[3]);
        }
        agg_.r1 = r1.value();
        agg_.r2 = r2.value();
        agg_.r34 = r34.value();
    }

    void full_refresh() {
        for (std::size_t j = 0; j < lat_.sites(); ++j) {
            const auto c = zgb_site_rates(lat_, j, k1_, k2_);
            site_rates_[j] = c;
            site_total_[j] = c[0] + c[1] + c[2] + c[3];
        }
        refresh_sums();
    }

    ZgbLattice lat_;
    double k1_, k2_;
    std::vector<std::array<double, 4>> site_rates_;
    std::vector<double> site_total_;
    ZgbAggregates agg_;
};

}  // namespace pathsens::models
