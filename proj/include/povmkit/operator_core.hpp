#pragma once

#include "povmkit/types.hpp"

namespace povmkit {

struct HermitianEig {
    RVec eigenvalues;  // ascending
    CMat eigenvectors; // unitary, column k pairs with eigenvalues[k]
};

/// True iff every entry of A is finite (no NaN/Inf).
bool is_finite(const CMat& a);

/// Max entry magnitude of A - A†.
double hermiticity_defect(const CMat& a);

bool is_hermitian(const CMat& a, const Tolerance& tol = {});

/// Operator norm as the largest singular value, via the eigenvalues of A†A.
double operator_norm(const CMat& a);

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
/// Throws not_hermitian if the Hermiticity defect exceeds tol.eps_herm.
HermitianEig hermitian_eig(const CMat& a, const Tolerance& tol = {});

/// Effect test: Hermitian with spectrum inside [-eps_psd, 1 + eps_psd].
bool is_effect(const CMat& a, const Tolerance& tol = {});

/// ||A^2 - A|| in operator norm (infinite if not Hermitian-safe to square, caller checks).
double projection_defect(const CMat& a);

bool is_projection(const CMat& a, const Tolerance& tol = {});

/// Projection onto the span of eigenvectors of a PSD matrix with eigenvalue
/// above tol.eps_psd. Throws not_psd if A has an eigenvalue below -eps_psd.
CMat support_projection(const CMat& a, const Tolerance& tol = {});

/// Orthonormal basis (d x r) of the support of a PSD matrix; r may be 0.
CMat support_basis(const CMat& a, const Tolerance& tol = {});

/// ||AB - BA|| in operator norm. Throws dimension_mismatch.
double commutator_norm(const CMat& a, const CMat& b);

}  // namespace povmkit
