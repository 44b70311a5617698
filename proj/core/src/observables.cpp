#include "halfline/observables.hpp"

#include <cmath>

#include "halfline/errors.hpp"
#include "halfline/limit_dynamics.hpp"

namespace halfline {

namespace {
constexpr double kTermNormTol = 1e-8;
}

FiniteRankObservable::FiniteRankObservable(std::vector<Term> terms, double identity_part)
    : terms_(std::move(terms)), identity_part_(identity_part) {
    if (!std::isfinite(identity_part_)) {
        throw InvalidArgument("finite-rank observable: identity part must be finite");
    }
    for (const auto& term : terms_) {
        if (std::abs(norm(term.vector) - 1.0) > kTermNormTol) {
            throw InvalidArgument("finite-rank observable: term vector is not unit norm");
        }
        if (!(term.vector.grid() == terms_.front().vector.grid())) {
            throw InvalidArgument("finite-rank observable: terms on different grids");
        }
    }
}

FiniteRankObservable FiniteRankObservable::projector(const WaveFunction& u, double coefficient) {
    const double n = norm(u);
    if (n == 0.0) {
        throw InvalidArgument("cannot project onto the zero vector");
    }
    WaveFunction unit = u;
    unit *= 1.0 / n;
    return FiniteRankObservable({Term{coefficient, std::move(unit)}});
}

FiniteRankObservable FiniteRankObservable::identity(double lambda) { return FiniteRankObservable({}, lambda); }

cplx expectation(const WaveFunction& u, const MultiplicationObservable& a) {
    return inner(u, multiply(a.f, u));
}

cplx expectation(const WaveFunction& u, const FiniteRankObservable& a) {
    double acc = a.identity_part() * norm_squared(u);
    for (const auto& term : a.terms()) {
        acc += term.coefficient * std::norm(inner(term.vector, u));
    }
    return {acc, 0.0};
}

cplx expectation(const WaveFunction& u, const Observable& a) {
    return std::visit([&](const auto& obs) { return expectation(u, obs); }, a);
}

cplx regularized_expectation(const WaveFunction& phi, const Observable& a, const EvolutionParams& p) {
    return expectation(spectral_evolve(phi, p), a);
}

cplx comp_expectation_limit(const WaveFunction& phi, const FiniteRankObservable& a, double b, double t) {
    if (std::abs(norm(phi) - 1.0) > kUnitNormTol) {
        throw InvalidArgument("comp_expectation_limit: input is not a unit vector");
    }
    double acc = a.identity_part();
    const WaveFunction v = shift_V(phi, b, t);
    for (const auto& term : a.terms()) {
        acc += term.coefficient * std::norm(inner(term.vector, v));
    }
    return {acc, 0.0};
}

cplx limit_expectation(const WaveFunction& phi, const Observable& a, double b, double t) {
    if (const auto* m = std::get_if<MultiplicationObservable>(&a)) {
        return mult_expectation_limit(phi, m->f, b, t);
    }
    return comp_expectation_limit(phi, std::get<FiniteRankObservable>(a), b, t);
}

}  // namespace halfline
