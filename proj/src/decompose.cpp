#include "icrl/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace icrl {

namespace {

constexpr double kThetaTolerance = 1e-12;
constexpr double kCertifyTolerance = 1e-9;
constexpr double kObjectiveTieTolerance = 1e-12;

ParamVector lower_vector(const DecompositionProblem& problem) {
    const std::size_t k = problem.hlm->num_subsystems();
    ParamVector p = ParamVector::filled(k, 0.0);
    for (std::size_t c = 0; c < k; ++c) p[c] = problem.lower_bound(static_cast<SubsystemId>(c));
    return p;
}

double objective_of(const DecompositionProblem& problem, const ParamVector& p) {
    double sum = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) sum += p[c] - problem.lower_bound(static_cast<SubsystemId>(c));
    return sum;
}

}  // namespace

double DecompositionProblem::lower_bound(SubsystemId c) const {
    const auto i = static_cast<std::size_t>(c);
    return i < lower.size() && lower[i] ? *lower[i] : 0.0;
}

double DecompositionProblem::upper_bound(SubsystemId c) const {
    const auto i = static_cast<std::size_t>(c);
    return i < upper.size() && upper[i] ? std::min(1.0, *upper[i]) : 1.0;
}

void DecompositionProblem::validate() const {
    if (hlm == nullptr) throw std::invalid_argument("decomposition problem has no HLM");
    if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in [0, 1]");
    const std::size_t k = hlm->num_subsystems();
    if (lower.size() > k || upper.size() > k) throw std::invalid_argument("bound vectors longer than the subsystem count");
    for (std::size_t c = 0; c < k; ++c) {
        const double lo = lower_bound(static_cast<SubsystemId>(c));
        const double hi = upper_bound(static_cast<SubsystemId>(c));
        if (!(lo >= 0.0 && lo <= 1.0) || !(hi >= 0.0 && hi <= 1.0)) {
            throw std::invalid_argument(fmt::format("bounds of subsystem {} lie outside [0, 1]", c));
        }
    }
}

std::vector<HlmPath> enumerate_paths(const Hlm& hlm) {
    std::vector<HlmPath> paths;
    HlmPath current;
    std::vector<bool> on_path(hlm.num_states(), false);

    std::function<void(AbstractIndex)> visit = [&](AbstractIndex s) {
        if (s == hlm.goal_state) {
            if (paths.size() >= kMaxPaths) {
                throw PathExplosion(fmt::format("more than {} simple paths to the goal", kMaxPaths));
            }
            paths.push_back(current);
            return;
        }
        if (hlm.is_terminal(s)) return;
        for (SubsystemId c : hlm.available[static_cast<std::size_t>(s)]) {
            const AbstractIndex next = hlm.succ[static_cast<std::size_t>(c)];
            if (next == hlm.fail_state || on_path[static_cast<std::size_t>(next)]) continue;
            on_path[static_cast<std::size_t>(next)] = true;
            current.states.push_back(next);
            current.subsystems.push_back(c);
            visit(next);
            current.states.pop_back();
            current.subsystems.pop_back();
            on_path[static_cast<std::size_t>(next)] = false;
        }
    };

    on_path[static_cast<std::size_t>(hlm.init_state)] = true;
    current.states.push_back(hlm.init_state);
    visit(hlm.init_state);
    return paths;
}

std::optional<PathAssignment> waterfill_path(const HlmPath& path, double threshold, const DecompositionProblem& bounds) {
    const std::size_t m = path.subsystems.size();
    std::vector<double> lo(m), hi(m);
    for (std::size_t i = 0; i < m; ++i) {
        lo[i] = bounds.lower_bound(path.subsystems[i]);
        hi[i] = bounds.upper_bound(path.subsystems[i]);
        if (lo[i] > hi[i]) return std::nullopt;
    }

    auto product_at = [&](double theta) {
        double prod = 1.0;
        for (std::size_t i = 0; i < m; ++i) prod *= std::clamp(theta, lo[i], hi[i]);
        return prod;
    };

    if (product_at(1.0) < threshold) return std::nullopt;

    // Smallest theta whose clamped product meets the threshold.
    double theta_lo = 0.0;
    double theta_hi = 1.0;
    if (product_at(0.0) >= threshold) {
        theta_hi = 0.0;
    } else {
        while (theta_hi - theta_lo > kThetaTolerance) {
            const double mid = 0.5 * (theta_lo + theta_hi);
            if (product_at(mid) >= threshold) theta_hi = mid;
            else theta_lo = mid;
        }
    }

    PathAssignment out;
    out.theta = theta_hi;
    out.p.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.p[i] = std::clamp(theta_hi, lo[i], hi[i]);
    return out;
}

DecompositionResult solve_decomposition(const DecompositionProblem& problem) {
    problem.validate();
    const Hlm& hlm = *problem.hlm;
    const double threshold = 1.0 - problem.delta;

    DecompositionResult best;
    best.p = lower_vector(problem);
    best.objective = std::numeric_limits<double>::infinity();

    for (const HlmPath& path : enumerate_paths(hlm)) {
        const auto assignment = waterfill_path(path, threshold, problem);
        if (!assignment) continue;
        ParamVector p = lower_vector(problem);
        for (std::size_t i = 0; i < path.subsystems.size(); ++i) {
            p[static_cast<std::size_t>(path.subsystems[i])] = assignment->p[i];
        }
        const double objective = objective_of(problem, p);
        if (!best.feasible || objective < best.objective - kObjectiveTieTolerance) {
            best.p = std::move(p);
            best.support_path = path.subsystems;
            best.objective = objective;
            best.feasible = true;
        }
    }

    if (!best.feasible) {
        // Without any route the lower bounds alone can still satisfy a trivial threshold.
        best.certified_value = predict_task_success(hlm, best.p);
        best.feasible = threshold <= 0.0;
        best.objective = best.feasible ? 0.0 : std::numeric_limits<double>::infinity();
        return best;
    }

    best.certified_value = predict_task_success(hlm, best.p);
    if (best.certified_value < threshold - kCertifyTolerance) {
        throw std::logic_error(fmt::format("decomposition certification failed: reachability {} below {}",
                                           best.certified_value, threshold));
    }
    return best;
}

DecompositionResult oracle_grid_solve(const DecompositionProblem& problem, double resolution) {
    problem.validate();
    const Hlm& hlm = *problem.hlm;
    const std::size_t k = hlm.num_subsystems();
    if (k > 4) throw TooManyParameters(fmt::format("grid oracle supports at most 4 subsystems, got {}", k));
    if (!(resolution > 0.0 && resolution <= 0.5)) throw std::invalid_argument("grid resolution must lie in (0, 0.5]");
    const double threshold = 1.0 - problem.delta;

    // Candidate values per parameter: both bounds plus every grid multiple between them.
    std::vector<std::vector<double>> grid(k);
    std::vector<double> lo(k), hi(k);
    for (std::size_t c = 0; c < k; ++c) {
        lo[c] = problem.lower_bound(static_cast<SubsystemId>(c));
        hi[c] = problem.upper_bound(static_cast<SubsystemId>(c));
        if (lo[c] > hi[c]) continue;
        grid[c].push_back(lo[c]);
        for (long i = static_cast<long>(std::floor(lo[c] / resolution)) + 1; i * resolution < hi[c]; ++i) {
            grid[c].push_back(static_cast<double>(i) * resolution);
        }
        if (hi[c] > lo[c]) grid[c].push_back(hi[c]);
    }

    DecompositionResult best;
    best.p = lower_vector(problem);
    best.objective = std::numeric_limits<double>::infinity();
    if (std::any_of(grid.begin(), grid.end(), [](const auto& g) { return g.empty(); })) return best;

    std::vector<double> point(k);
    auto feasible_at = [&](const std::vector<double>& values) {
        return predict_task_success(hlm, ParamVector(values)) >= threshold;
    };
    {
        std::vector<double> top(hi);
        if (!feasible_at(top)) return best;
    }

    std::vector<double> suffix_lo(k + 1, 0.0);
    for (std::size_t c = k; c-- > 0;) suffix_lo[c] = suffix_lo[c + 1] + lo[c];

    // Depth-first over coordinates. Reachability is monotone in every
    // parameter, so with the prefix fixed and the remaining coordinates at
    // their upper bounds, each coordinate's feasible values form a suffix of
    // its grid. The start of that suffix bounds the coordinate from below in
    // any feasible completion, which gives the pruning bound.
    std::vector<double> probe(k);
    auto first_feasible = [&](std::size_t c, std::size_t j) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < k; ++i) probe[i] = i < c ? point[i] : hi[i];
        auto feasible_with = [&](std::size_t idx) {
            probe[j] = grid[j][idx];
            return feasible_at(probe);
        };
        std::size_t good = grid[j].size() - 1;
        if (!feasible_with(good)) return std::nullopt;
        if (feasible_with(0)) return 0;
        std::size_t bad = 0;
        while (good - bad > 1) {
            const std::size_t mid = bad + (good - bad) / 2;
            if (feasible_with(mid)) good = mid;
            else bad = mid;
        }
        return good;
    };

    std::function<void(std::size_t, double)> search = [&](std::size_t c, double partial) {
        std::size_t first = 0;
        double bound = partial;
        for (std::size_t j = c; j < k; ++j) {
            const auto idx = first_feasible(c, j);
            if (!idx) return;
            if (j == c) first = *idx;
            bound += grid[j][*idx];
        }
        if (bound - suffix_lo[0] >= best.objective - kObjectiveTieTolerance) return;

        if (c + 1 == k) {
            point[c] = grid[c][first];
            best.objective = partial + point[c] - suffix_lo[0];
            best.p = ParamVector(point);
            best.feasible = true;
            return;
        }
        for (std::size_t idx = first; idx < grid[c].size(); ++idx) {
            const double v = grid[c][idx];
            if (partial + v + suffix_lo[c + 1] - suffix_lo[0] >= best.objective - kObjectiveTieTolerance) break;
            point[c] = v;
            search(c + 1, partial + v);
        }
    };
    search(0, 0.0);

    if (best.feasible) best.certified_value = predict_task_success(hlm, best.p);
    return best;
}

}  // namespace icrl
