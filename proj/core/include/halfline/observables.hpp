#pragma once

#include <variant>
#include <vector>

#include "halfline/evolvers.hpp"
#include "halfline/grid.hpp"

namespace halfline {

/// Multiplication by an essentially bounded function.
struct MultiplicationObservable {
    BoundedFunction f;
};

/// sum_k c_k P_{phi_k} + lambda I: finite-rank approximants of the
/// compact-plus-identity algebra.
class FiniteRankObservable {
public:
    struct Term {
        double coefficient;
        WaveFunction vector;  ///< unit norm
    };

    /// Throws InvalidArgument if a vector is not unit within 1e-8 or the
    /// vectors live on different grids.
    explicit FiniteRankObservable(std::vector<Term> terms, double identity_part = 0.0);

    /// Rank-one projector onto u / ||u||.
    static FiniteRankObservable projector(const WaveFunction& u, double coefficient = 1.0);
    /// lambda I with no compact part.
    static FiniteRankObservable identity(double lambda = 1.0);

    const std::vector<Term>& terms() const noexcept { return terms_; }
    double identity_part() const noexcept { return identity_part_; }

private:
    std::vector<Term> terms_;
    double identity_part_;
};

using Observable = std::variant<MultiplicationObservable, FiniteRankObservable>;

/// Raw quadratic form (u, A u); u is not required to be normalized.
cplx expectation(const WaveFunction& u, const MultiplicationObservable& a);
cplx expectation(const WaveFunction& u, const FiniteRankObservable& a);
cplx expectation(const WaveFunction& u, const Observable& a);

/// (U_eps(t) phi, A U_eps(t) phi) with U_eps from the spectral engine.
cplx regularized_expectation(const WaveFunction& phi, const Observable& a, const EvolutionParams& p);

/// eps -> 0 limit on the compact-plus-identity algebra,
/// (V_t phi, K V_t phi) + lambda: the singular part J sees only lambda.
cplx comp_expectation_limit(const WaveFunction& phi, const FiniteRankObservable& a, double b, double t);

/// eps -> 0 limit for either algebra (Kraus pair for multiplication operators,
/// transmitted branch only for finite-rank ones).
cplx limit_expectation(const WaveFunction& phi, const Observable& a, double b, double t);

}  // namespace halfline
