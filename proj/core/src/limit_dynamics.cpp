#include "halfline/limit_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "halfline/errors.hpp"

namespace halfline {

namespace {

void require_drift_and_time(double b, double t, const char* what) {
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw InvalidArgument(std::string(what) + " requires finite b > 0");
    }
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw InvalidArgument(std::string(what) + " requires finite t >= 0");
    }
}

void require_unit(const WaveFunction& phi, const char* what) {
    if (std::abs(norm(phi) - 1.0) > kUnitNormTol) {
        throw InvalidArgument(std::string(what) + ": input is not a unit vector");
    }
}

}  // namespace

std::vector<double> KrausBranchState::probabilities() const {
    std::vector<double> p;
    p.reserve(branches.size());
    for (const auto& b : branches) {
        p.push_back(norm_squared(b));
    }
    return p;
}

double KrausBranchState::total_probability() const {
    const auto p = probabilities();
    return std::accumulate(p.begin(), p.end(), 0.0);
}

WoldProjectors::WoldProjectors(const Grid& grid, double b, double t)
    : grid_(grid), t_(t), edge_(b * t) {
    require_drift_and_time(b, t, "wold_projectors");
}

WaveFunction WoldProjectors::unitary(const WaveFunction& u) const {
    WaveFunction out(grid_);
    for (std::size_t j = 0; j < grid_.size(); ++j) {
        if (grid_.node(j) > edge_) {
            out[j] = u[j];
        }
    }
    return out;
}

WaveFunction WoldProjectors::shift(const WaveFunction& u) const {
    WaveFunction out(grid_);
    for (std::size_t j = 0; j < grid_.size(); ++j) {
        if (grid_.node(j) <= edge_) {
            out[j] = u[j];
        }
    }
    return out;
}

WaveFunction shift_V(const WaveFunction& phi, double b, double t) {
    require_drift_and_time(b, t, "shift_V");
    return shift_sample(phi, b * t);
}

WaveFunction reflect_W(const WaveFunction& phi, double b, double t) {
    require_drift_and_time(b, t, "reflect_W");
    const double bt = b * t;
    return indicator_project(reflect_sample(phi, bt), 0.0, bt);
}

KrausBranchState kraus_apply(const WaveFunction& phi, double b, double t) {
    require_unit(phi, "kraus_apply");
    KrausBranchState s;
    s.branches.push_back(shift_V(phi, b, t));
    s.branches.push_back(reflect_W(phi, b, t));
    return s;
}

cplx mult_expectation_limit(const WaveFunction& phi, const BoundedFunction& f, double b, double t) {
    require_unit(phi, "mult_expectation_limit");
    const WaveFunction v = shift_V(phi, b, t);
    const WaveFunction w = reflect_W(phi, b, t);
    return inner(v, multiply(f, v)) + inner(w, multiply(f, w));
}

CompAlgebraState comp_state_evolve(const WaveFunction& phi, double b, double t) {
    require_unit(phi, "comp_state_evolve");
    require_drift_and_time(b, t, "comp_state_evolve");
    WaveFunction unit = phi;
    unit *= 1.0 / norm(phi);
    // alpha = ||V_t phi||^2 = int_{bt}^L |phi|^2, taken on the unshifted cells:
    // interpolating the shift would perturb it by O(h^2) even before the
    // support reaches the boundary.
    const Grid& g = unit.grid();
    const double h = g.spacing();
    const double edge = b * t;
    double tail = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double covered = std::clamp((static_cast<double>(j) + 1.0) * h - edge, 0.0, h);
        tail += std::norm(unit[j]) * covered;
    }
    const double alpha = std::min(tail, 1.0);
    WaveFunction w = shift_V(unit, b, t);
    const double wn = norm(w);
    CompAlgebraState s;
    if (alpha > kAlphaFloor && wn > 0.0) {
        w *= 1.0 / wn;
        s.alpha = alpha;
        s.normal_part = std::move(w);
        s.singular_weight = 1.0 - alpha;
    }
    return s;
}

double destruction_time(const WaveFunction& phi, double b) {
    require_unit(phi, "destruction_time");
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw InvalidArgument("destruction_time requires finite b > 0");
    }
    const Grid& g = phi.grid();
    const double h = g.spacing();
    double mass = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        mass += std::norm(phi[j]) * h;
        if (mass > kMassFloor) {
            return g.node(j) / b;
        }
    }
    throw InvalidArgument("destruction_time: zero initial datum");
}

WoldProjectors wold_projectors(double b, double t, const Grid& grid) { return {grid, b, t}; }

double comp_semigroup_check(const WaveFunction& phi, double b, double t, double tau) {
    require_unit(phi, "comp_semigroup_check");
    if (tau == 0.0) {
        return 0.0;
    }
    const CompAlgebraState direct = comp_state_evolve(phi, b, t + tau);
    const CompAlgebraState first = comp_state_evolve(phi, b, tau);

    double composed_alpha = 0.0;
    std::optional<WaveFunction> composed_vector;
    if (first.normal_part) {
        const CompAlgebraState second = comp_state_evolve(*first.normal_part, b, t);
        composed_alpha = first.alpha * second.alpha;
        composed_vector = second.normal_part;
    }

    double defect = std::abs(direct.alpha - composed_alpha);
    if (direct.normal_part && composed_vector) {
        defect += distance(*direct.normal_part, *composed_vector);
    } else if (direct.normal_part.has_value() != composed_vector.has_value()) {
        defect += 1.0;
    }
    return defect;
}

double shift_semigroup_defect(const WaveFunction& phi, double b, double t, double tau) {
    return distance(shift_V(shift_V(phi, b, tau), b, t), shift_V(phi, b, t + tau));
}

double reflect_semigroup_defect(const WaveFunction& phi, double b, double t, double tau) {
    return distance(reflect_W(reflect_W(phi, b, tau), b, t), reflect_W(phi, b, t + tau));
}

}  // namespace halfline
