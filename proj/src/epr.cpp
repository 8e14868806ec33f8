#include "hmsim/epr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hmsim/analytic.hpp"
#include "hmsim/error.hpp"
#include "hmsim/parallel.hpp"
#include "hmsim/sampler.hpp"

namespace hmsim
{
//---------------------------------------------------------------------------//
// Pair mechanics
//---------------------------------------------------------------------------//
namespace
{
// Measure one particle; if the pair is still central it sits at t = 0.
// Afterwards the measured particle is at +-axis and the partner antipodal.
Outcome measure_side(std::optional<Direction>& self,
                     std::optional<Direction>& partner,
                     Direction const& axis,
                     ElasticSpec const& e,
                     RandomStream& rng)
{
    double const t = self ? axis_coordinate(*self, axis) : 0.0;
    double const lambda = sample_break_point(e, rng);
    Outcome const o = hidden_outcome_at(t, lambda, rng);
    Direction const pos = o == Outcome::O1 ? axis : -axis;
    self = pos;
    partner = -pos;
    return o;
}

Direction uniform_on_sphere(RandomStream& rng)
{
    double const z = 2 * rng.uniform() - 1;
    double const phi = 2 * std::numbers::pi * rng.uniform();
    double const r = std::sqrt(std::max(0.0, (1 - z) * (1 + z)));
    if (r == 0)
        return Direction(0, 0, z < 0 ? -1 : 1);
    return Direction(r * std::cos(phi), r * std::sin(phi), z);
}
}  // namespace

Outcome EntangledPair::measure_left(Direction const& a, ElasticSpec const& e, RandomStream& rng)
{
    return measure_side(left_, right_, a, e, rng);
}

Outcome EntangledPair::measure_right(Direction const& b, ElasticSpec const& e, RandomStream& rng)
{
    if (!localized())
    {
        throw ValidationError("measure_right requires a localized pair; measure the left "
                              "wing first");
    }
    return measure_side(right_, left_, b, e, rng);
}

WingSpecs::WingSpecs(ElasticSpec const& l, ElasticSpec const& r) : left{l}, right{r}
{
    if (l.d() != 0)
    {
        throw ValidationError("the source (left) wing of the pair requires d = 0");
    }
}

PairOutcome
measure_pair(Direction const& a, Direction const& b, WingSpecs const& specs, RandomStream& rng)
{
    std::uint64_t const base = rng.position();
    EntangledPair pair;
    PairOutcome result;
    result.left = pair.measure_left(a, specs.left, rng);
    rng.seek(base + 2);
    result.right = pair.measure_right(b, specs.right, rng);
    rng.seek(base + 4);
    return result;
}

PairOutcome measure_pair_right_first(Direction const& a,
                                     Direction const& b,
                                     WingSpecs const& specs,
                                     RandomStream& rng)
{
    std::uint64_t const base = rng.position();
    std::optional<Direction> left;
    std::optional<Direction> right;
    PairOutcome result;
    // The first-measured side is the source wing and uses the d = 0 elastic
    result.right = measure_side(right, left, b, specs.left, rng);
    rng.seek(base + 2);
    result.left = measure_side(left, right, a, specs.right, rng);
    rng.seek(base + 4);
    return result;
}

PairOutcome measure_pair_severed(Direction const& a,
                                 Direction const& b,
                                 ElasticSpec const& e,
                                 RandomStream& rng)
{
    std::uint64_t const base = rng.position();
    Direction const w = uniform_on_sphere(rng);
    PairOutcome result;
    rng.seek(base + 2);
    result.left = measure(w, a, e, rng).outcome;
    rng.seek(base + 4);
    result.right = measure(-w, b, e, rng).outcome;
    rng.seek(base + 6);
    return result;
}

double correlation_analytic(Direction const& a, Direction const& b, WingSpecs const& specs)
{
    // Fair left coin; the right particle then sits at -a (left O1) or a (O2)
    double const after_o1 = expectation(-a, b, specs.right);
    double const after_o2 = expectation(a, b, specs.right);
    return 0.5 * (after_o1 - after_o2);
}

//---------------------------------------------------------------------------//
// Joint counts
//---------------------------------------------------------------------------//
std::uint64_t JointCounts::total() const
{
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

double JointCounts::correlation() const
{
    auto const same = static_cast<double>(counts[0][0] + counts[1][1]);
    auto const diff = static_cast<double>(counts[0][1] + counts[1][0]);
    return (same - diff) / static_cast<double>(total());
}

double JointCounts::left_frequency_o1() const
{
    return static_cast<double>(counts[0][0] + counts[0][1]) / static_cast<double>(total());
}

double JointCounts::right_frequency_o1() const
{
    return static_cast<double>(counts[0][0] + counts[1][0]) / static_cast<double>(total());
}

JointCounts& JointCounts::operator+=(JointCounts const& other)
{
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            counts[i][j] += other.counts[i][j];
    return *this;
}

JointCounts run_pair_trials(Direction const& a,
                            Direction const& b,
                            WingSpecs const& specs,
                            PairTrialOptions const& opts)
{
    if (opts.n == 0)
    {
        throw ValidationError("number of trials must be positive");
    }
    std::uint64_t const blocks = num_trial_blocks(opts.n);
    std::vector<JointCounts> partial(blocks);

    parallel_for_blocks(blocks, opts.workers, [&](std::uint64_t blk) {
        std::uint64_t const first = blk * trial_block_size;
        std::uint64_t const last = std::min(first + trial_block_size, opts.n);
        JointCounts local;
        for (std::uint64_t i = first; i < last; ++i)
        {
            RandomStream rng(opts.seed, i);
            PairOutcome o;
            switch (opts.model)
            {
                case PairModel::rod:
                    o = measure_pair(a, b, specs, rng);
                    break;
                case PairModel::rod_right_first:
                    o = measure_pair_right_first(a, b, specs, rng);
                    break;
                case PairModel::severed:
                    o = measure_pair_severed(a, b, specs.right, rng);
                    break;
            }
            local.counts[static_cast<int>(o.left)][static_cast<int>(o.right)] += 1;
        }
        partial[blk] = local;
    });

    JointCounts total;
    for (auto const& p : partial)
        total += p;
    return total;
}

//---------------------------------------------------------------------------//
// CHSH
//---------------------------------------------------------------------------//
ChshSetting chsh_setting_deg(double a, double a_prime, double b, double b_prime)
{
    return {direction_in_xz_deg(a),
            direction_in_xz_deg(a_prime),
            direction_in_xz_deg(b),
            direction_in_xz_deg(b_prime)};
}

double chsh_combination(double e_ab, double e_abp, double e_apb, double e_apbp)
{
    return e_ab + e_abp + e_apb - e_apbp;
}

double chsh_max_placement(double e_ab, double e_abp, double e_apb, double e_apbp)
{
    double const total = e_ab + e_abp + e_apb + e_apbp;
    double best = 0;
    for (double e : {e_ab, e_abp, e_apb, e_apbp})
        best = std::max(best, std::fabs(total - 2 * e));
    return best;
}

double chsh_analytic(ChshSetting const& s, WingSpecs const& specs)
{
    return chsh_combination(correlation_analytic(s.a, s.b, specs),
                            correlation_analytic(s.a, s.b_prime, specs),
                            correlation_analytic(s.a_prime, s.b, specs),
                            correlation_analytic(s.a_prime, s.b_prime, specs));
}

ChshEstimate chsh_monte_carlo(ChshSetting const& s,
                              WingSpecs const& specs,
                              PairTrialOptions const& opts)
{
    if (opts.n == 0)
    {
        throw ValidationError("monte-carlo CHSH requires n > 0");
    }
    std::array<std::pair<Direction, Direction>, 4> const pairs{{
        {s.a, s.b},
        {s.a, s.b_prime},
        {s.a_prime, s.b},
        {s.a_prime, s.b_prime},
    }};
    ChshEstimate est;
    double variance = 0;
    for (std::size_t k = 0; k < pairs.size(); ++k)
    {
        PairTrialOptions sub = opts;
        sub.seed = derive_seed(opts.seed, k);
        double const e = run_pair_trials(pairs[k].first, pairs[k].second, specs, sub).correlation();
        est.correlations[k] = e;
        variance += (1 - e * e) / static_cast<double>(opts.n);
    }
    est.s = chsh_combination(
        est.correlations[0], est.correlations[1], est.correlations[2], est.correlations[3]);
    est.std_error = std::sqrt(variance);
    return est;
}

namespace
{
double coplanar_objective(WingSpecs const& specs, double a_prime, double b, double b_prime)
{
    ChshSetting const s = chsh_setting_deg(0, a_prime, b, b_prime);
    return chsh_max_placement(correlation_analytic(s.a, s.b, specs),
                              correlation_analytic(s.a, s.b_prime, specs),
                              correlation_analytic(s.a_prime, s.b, specs),
                              correlation_analytic(s.a_prime, s.b_prime, specs));
}
}  // namespace

ChshOptimum
chsh_optimize_coplanar(ElasticSpec const& e, double resolution_deg, double refine_tol_deg)
{
    if (!(resolution_deg > 0) || !(refine_tol_deg > 0))
    {
        throw ValidationError("angle resolution and refinement tolerance must be positive");
    }
    auto const steps = static_cast<long>(std::llround(360.0 / resolution_deg));
    if (steps < 4 || std::fabs(static_cast<double>(steps) * resolution_deg - 360.0) > 1e-9)
    {
        throw ValidationError("angle resolution must divide 360 degrees");
    }
    if (steps > 1440)
    {
        throw ValidationError("angle resolution finer than 0.25 degrees is not supported");
    }
    WingSpecs const specs(e);

    // Correlations for every pair of grid angles, evaluated exactly as the
    // refinement objective does, so grid values and refined values agree
    auto const m = static_cast<std::size_t>(steps);
    std::vector<Direction> dirs(m);
    for (std::size_t k = 0; k < m; ++k)
        dirs[k] = direction_in_xz_deg(static_cast<double>(k) * resolution_deg);
    std::vector<double> table(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            table[i * m + j] = correlation_analytic(dirs[i], dirs[j], specs);

    double best = -1;
    std::size_t best_i = 0, best_j = 0, best_k = 0;
    for (std::size_t i = 0; i < m; ++i)
    {
        for (std::size_t j = 0; j < m; ++j)
        {
            double const e_ab = table[j];
            double const e_apb = table[i * m + j];
            for (std::size_t k = 0; k < m; ++k)
            {
                double const v = chsh_max_placement(e_ab, table[k], e_apb, table[i * m + k]);
                if (v > best)
                {
                    best = v;
                    best_i = i;
                    best_j = j;
                    best_k = k;
                }
            }
        }
    }

    std::array<double, 3> x{static_cast<double>(best_i) * resolution_deg,
                            static_cast<double>(best_j) * resolution_deg,
                            static_cast<double>(best_k) * resolution_deg};
    double fx = coplanar_objective(specs, x[0], x[1], x[2]);
    for (double step = resolution_deg; step >= refine_tol_deg; step /= 2)
    {
        bool improved = true;
        while (improved)
        {
            improved = false;
            for (std::size_t c = 0; c < 3; ++c)
            {
                for (double sign : {1.0, -1.0})
                {
                    auto trial = x;
                    trial[c] += sign * step;
                    double const ft = coplanar_objective(specs, trial[0], trial[1], trial[2]);
                    if (ft > fx)
                    {
                        x = trial;
                        fx = ft;
                        improved = true;
                    }
                }
            }
        }
    }

    // Relabel so the conventional combination (minus on E(a',b')) attains
    // the maximum, then flip b, b' by 180 deg if needed to make S positive
    std::array<double, 4> ang{0.0, x[0], x[1], x[2]};  // a, a', b, b'
    auto conventional = [&] {
        return chsh_analytic(chsh_setting_deg(ang[0], ang[1], ang[2], ang[3]), specs);
    };
    ChshSetting const s = chsh_setting_deg(ang[0], ang[1], ang[2], ang[3]);
    std::array<double, 4> const corr{correlation_analytic(s.a, s.b, specs),
                                  correlation_analytic(s.a, s.b_prime, specs),
                                  correlation_analytic(s.a_prime, s.b, specs),
                                  correlation_analytic(s.a_prime, s.b_prime, specs)};
    double const total = corr[0] + corr[1] + corr[2] + corr[3];
    std::size_t minus = 3;
    for (std::size_t j = 0; j < 4; ++j)
    {
        if (std::fabs(total - 2 * corr[j]) > std::fabs(total - 2 * corr[minus]))
            minus = j;
    }
    if (minus == 0 || minus == 1)
        std::swap(ang[0], ang[1]);
    if (minus == 0 || minus == 2)
        std::swap(ang[2], ang[3]);
    if (conventional() < 0)
    {
        ang[2] += 180;
        ang[3] += 180;
    }
    auto wrap = [](double deg) { return deg - 360 * std::floor(deg / 360); };
    for (double& a : ang)
        a = wrap(a);
    return {fx, ang[0], ang[1], ang[2], ang[3]};
}

double chsh_optimize_sphere(ElasticSpec const& e, int restarts, std::uint64_t seed)
{
    if (restarts < 1)
    {
        throw ValidationError("at least one restart is required");
    }
    WingSpecs const specs(e);
    auto objective = [&](std::array<double, 8> const& p) {
        Direction const a = Direction::from_spherical(p[0], p[1]);
        Direction const ap = Direction::from_spherical(p[2], p[3]);
        Direction const b = Direction::from_spherical(p[4], p[5]);
        Direction const bp = Direction::from_spherical(p[6], p[7]);
        return chsh_max_placement(correlation_analytic(a, b, specs),
                                  correlation_analytic(a, bp, specs),
                                  correlation_analytic(ap, b, specs),
                                  correlation_analytic(ap, bp, specs));
    };

    double best = 0;
    for (int r = 0; r < restarts; ++r)
    {
        RandomStream rng(seed, static_cast<std::uint64_t>(r));
        std::array<double, 8> x;
        for (auto& xi : x)
            xi = 2 * std::numbers::pi * rng.uniform();
        double fx = objective(x);
        for (double step = 0.5; step >= 1e-9; step /= 2)
        {
            bool improved = true;
            while (improved)
            {
                improved = false;
                for (std::size_t c = 0; c < x.size(); ++c)
                {
                    for (double sign : {1.0, -1.0})
                    {
                        auto trial = x;
                        trial[c] += sign * step;
                        double const ft = objective(trial);
                        if (ft > fx)
                        {
                            x = trial;
                            fx = ft;
                            improved = true;
                        }
                    }
                }
            }
        }
        best = std::max(best, fx);
    }
    return best;
}

std::vector<ChshSweepRow> chsh_sweep(std::vector<double> const& epsilons, double resolution_deg)
{
    if (epsilons.empty())
    {
        throw ValidationError("epsilon grid must not be empty");
    }
    for (double eps : epsilons)
    {
        if (!(eps >= 0 && eps <= 1))
            throw ValidationError("epsilon grid values must lie in [0, 1]");
    }
    std::vector<ChshSweepRow> rows;
    rows.reserve(epsilons.size());
    for (double eps : epsilons)
    {
        rows.push_back({eps, chsh_optimize_coplanar(ElasticSpec(eps, 0), resolution_deg)});
    }
    return rows;
}

}  // namespace hmsim
