#include "povmkit/decision.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "povmkit/operator_core.hpp"

namespace povmkit {

namespace {

// Joint diagonalization always runs from this fixed seed so that decisions
// are functions of their inputs alone.
constexpr std::uint64_t kJointDiagSeed = 0x243f6a8885a308d3ULL;
constexpr int kMaxRedraws = 8;
// Joint-eigenvalue vectors closer than this in max-norm belong to one
// outcome of the parent.
constexpr double kGroupGap = 1e-6;
// Eigenvalue gap that splits a block during the refinement fallback.
constexpr double kRefineGap = 1e-7;
// find_kernel snaps solution entries this close to {0, 1} onto the bound,
// provided the snapped kernel still satisfies every equality.
constexpr double kSnapWindow = 1e-3;
// Singular values above this count toward the rank in is_extremal.
constexpr double kExtremalRankFloor = 1e-7;
constexpr int kSubsetLimit = 20;          // 2^|X| enumerations stop here
constexpr double kAssignmentLimit = 1e6;  // |Y|^|X\C| enumerations stop here
constexpr double kRowSumSlack = 1e-12;    // kernel row sums hold exactly

double max_offdiagonal(const CMat& a) {
    double worst = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            if (i != j) worst = std::max(worst, std::abs(a(i, j)));
        }
    }
    return worst;
}

// Worst off-diagonal magnitude of any atom conjugated into the basis u.
double basis_defect(const Observable& m, const CMat& u) {
    double worst = 0.0;
    for (const CMat& atom : m.effects) {
        worst = std::max(worst, max_offdiagonal(u.adjoint() * atom * u));
    }
    return worst;
}

// Fallback joint diagonalization: refine a block decomposition atom by atom,
// splitting each block along eigenvalue gaps of the restricted atom.
CMat refined_basis(const Observable& m, const Tolerance& tol) {
    const int d = m.dim;
    std::vector<CMat> blocks{CMat::Identity(d, d)};
    for (const CMat& atom : m.effects) {
        std::vector<CMat> next;
        for (const CMat& v : blocks) {
            const int r = static_cast<int>(v.cols());
            if (r == 1) {
                next.push_back(v);
                continue;
            }
            CMat restricted = v.adjoint() * atom * v;
            restricted = 0.5 * (restricted + restricted.adjoint());
            HermitianEig eig = hermitian_eig(restricted, tol);
            int start = 0;
            for (int i = 1; i <= r; ++i) {
                if (i == r || eig.eigenvalues(i) - eig.eigenvalues(i - 1) > kRefineGap) {
                    next.push_back(v * eig.eigenvectors.middleCols(start, i - start));
                    start = i;
                }
            }
        }
        blocks = std::move(next);
    }
    CMat u(d, d);
    int col = 0;
    for (const CMat& v : blocks) {
        u.middleCols(col, v.cols()) = v;
        col += static_cast<int>(v.cols());
    }
    return u;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(int i, int j) { parent[find(j)] = find(i); }
};

std::string eigenvalue_label(const RVec& values) {
    std::string label = "(";
    char buf[32];
    for (int i = 0; i < values.size(); ++i) {
        double v = values(i);
        if (std::abs(v) < 5e-10) v = 0.0;  // suppress "-0.000000000"
        std::snprintf(buf, sizeof buf, "%.9f", v);
        if (i > 0) label += ",";
        label += buf;
    }
    return label + ")";
}

// The d^2 independent real components of a Hermitian matrix, in a fixed
// order (diagonal, then upper-triangle real and imaginary parts row by row).
RVec hermitian_components(const CMat& h) {
    const int d = static_cast<int>(h.rows());
    RVec out(d * d);
    int k = 0;
    for (int i = 0; i < d; ++i) out(k++) = h(i, i).real();
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            out(k++) = h(i, j).real();
            out(k++) = h(i, j).imag();
        }
    }
    return out;
}

std::vector<bool> zero_flags(const Observable& m, const Tolerance& tol) {
    std::vector<bool> flags(m.n_outcomes(), false);
    for (int x : zero_set_indices(m, tol)) flags[x] = true;
    return flags;
}

}  // namespace

SharpParent sharp_parent(const Observable& m, const Tolerance& tol) {
    const int d = m.dim;
    const int n = m.n_outcomes();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double c = commutator_norm(m.effects[i], m.effects[j]);
            if (c > tol.eps_eq) {
                throw povm_error(errc::non_commutative_range,
                                 "atoms '" + m.outcomes[i] + "' and '" + m.outcomes[j] +
                                     "' have commutator norm " + std::to_string(c));
            }
        }
    }

    // Diagonalize a generic positive combination of the atoms; a collision
    // of its eigenvalues across distinct joint eigenspaces shows up as
    // off-diagonal residue in some atom, and triggers a redraw.
    std::mt19937_64 engine(kJointDiagSeed);
    auto draw = [&engine] { return 1.0 + static_cast<double>(engine() >> 11) * 0x1.0p-53; };
    CMat u;
    bool diagonalized = false;
    for (int attempt = 0; attempt <= kMaxRedraws && !diagonalized; ++attempt) {
        CMat t = CMat::Zero(d, d);
        for (const CMat& atom : m.effects) t += draw() * atom;
        t = 0.5 * (t + t.adjoint());
        u = hermitian_eig(t, tol).eigenvectors;
        diagonalized = basis_defect(m, u) <= tol.eps_eq;
    }
    if (!diagonalized) {
        u = refined_basis(m, tol);
        diagonalized = basis_defect(m, u) <= tol.eps_eq;
    }
    if (!diagonalized) {
        throw povm_error(errc::numerical_breakdown,
                         "commuting atoms resisted joint diagonalization");
    }

    // Joint eigenvalue vector of each basis column, grouped into outcomes.
    std::vector<RVec> values(d, RVec(n));
    for (int x = 0; x < n; ++x) {
        CMat dx = u.adjoint() * m.effects[x] * u;
        for (int i = 0; i < d; ++i) values[i](x) = dx(i, i).real();
    }
    UnionFind uf(d);
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            if ((values[i] - values[j]).lpNorm<Eigen::Infinity>() < kGroupGap) uf.unite(i, j);
        }
    }
    std::map<int, std::vector<int>> by_root;
    for (int i = 0; i < d; ++i) by_root[uf.find(i)].push_back(i);
    std::vector<std::vector<int>> groups;
    for (auto& [root, members] : by_root) groups.push_back(std::move(members));
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    SharpParent result;
    result.parent.dim = d;
    const int k = static_cast<int>(groups.size());
    RMat nu(k, n);
    std::set<std::string> used;
    for (int g = 0; g < k; ++g) {
        const auto& members = groups[g];
        CMat basis(d, members.size());
        RVec mean = RVec::Zero(n);
        for (size_t c = 0; c < members.size(); ++c) {
            basis.col(c) = u.col(members[c]);
            mean += values[members[c]];
        }
        mean /= static_cast<double>(members.size());
        std::string label = eigenvalue_label(mean);
        while (!used.insert(label).second) label += "'";
        result.parent.outcomes.push_back(std::move(label));
        result.parent.effects.push_back(basis * basis.adjoint());
        nu.row(g) = mean.transpose();
    }
    result.kernel = WeakMarkovKernel{result.parent.outcomes, m.outcomes, std::move(nu),
                                     result.parent};

    Observable back = smear(result.parent, result.kernel, tol);
    for (int x = 0; x < n; ++x) {
        result.defect = std::max(result.defect, operator_norm(back.effects[x] - m.effects[x]));
    }
    if (result.defect > 1e-8) {
        throw povm_error(errc::numerical_breakdown,
                         "reconstructed smearing misses the input by " +
                             std::to_string(result.defect));
    }
    return result;
}

std::optional<BlockPartition> block_partition(const SharpObservable& p, const Observable& m,
                                              const Tolerance& tol) {
    if (p.dim != m.dim) {
        throw povm_error(errc::dimension_mismatch, "observables live on different spaces");
    }
    BlockPartition cert;
    cert.null_class = zero_set(m, tol);
    std::vector<bool> in_null = zero_flags(m, tol);

    std::vector<std::vector<int>> members(p.n_outcomes());
    for (int x = 0; x < m.n_outcomes(); ++x) {
        if (in_null[x]) continue;
        // P(y) M(x) = M(x) says exactly that M(x) lives inside the y-th
        // eigenspace; demand a unique such y.
        int chosen = -1;
        double chosen_defect = 0.0;
        for (int y = 0; y < p.n_outcomes(); ++y) {
            double defect = operator_norm(p.effects[y] * m.effects[x] - m.effects[x]);
            if (defect <= tol.eps_eq) {
                if (chosen >= 0) return std::nullopt;
                chosen = y;
                chosen_defect = defect;
            }
        }
        if (chosen < 0) return std::nullopt;
        cert.assignment.emplace_back(m.outcomes[x], p.outcomes[chosen]);
        cert.max_defect = std::max(cert.max_defect, chosen_defect);
        members[chosen].push_back(x);
    }

    const double bound = m.n_outcomes() * tol.eps_eq;
    for (int y = 0; y < p.n_outcomes(); ++y) {
        CMat sum = CMat::Zero(m.dim, m.dim);
        for (int x : members[y]) sum += m.effects[x];
        double defect = operator_norm(sum - p.effects[y]);
        if (defect > bound) return std::nullopt;
        cert.max_defect = std::max(cert.max_defect, defect);
    }
    return cert;
}

bool contains_range(const SharpObservable& p, const Observable& m, const Tolerance& tol) {
    return block_partition(p, m, tol).has_value();
}

bool brute_force_contains_range(const SharpObservable& p, const Observable& m,
                                const Tolerance& tol) {
    if (p.dim != m.dim) {
        throw povm_error(errc::dimension_mismatch, "observables live on different spaces");
    }
    const int n = m.n_outcomes();
    if (n > kSubsetLimit) {
        throw povm_error(errc::too_large, "subset enumeration beyond 2^" +
                                              std::to_string(kSubsetLimit) + " outcomes");
    }
    const double bound = n * tol.eps_eq;
    std::vector<bool> found(p.n_outcomes(), false);
    int remaining = p.n_outcomes();
    auto check = [&](const CMat& sum) {
        for (int y = 0; y < p.n_outcomes() && remaining > 0; ++y) {
            if (found[y]) continue;
            CMat diff = sum - p.effects[y];
            // Entrywise max never exceeds the operator norm, so it is a safe
            // cheap rejector before the eigensolve.
            if (diff.cwiseAbs().maxCoeff() > bound) continue;
            if (operator_norm(diff) <= bound) {
                found[y] = true;
                --remaining;
            }
        }
    };

    // Gray-code walk: consecutive subsets differ in one atom.
    CMat sum = CMat::Zero(m.dim, m.dim);
    check(sum);
    unsigned long prev = 0;
    for (unsigned long i = 1; i < (1UL << n) && remaining > 0; ++i) {
        unsigned long mask = i ^ (i >> 1);
        unsigned long flipped = mask ^ prev;
        int bit = std::countr_zero(flipped);
        if (mask & flipped) {
            sum += m.effects[bit];
        } else {
            sum -= m.effects[bit];
        }
        prev = mask;
        check(sum);
    }
    return remaining == 0;
}

std::optional<OutcomeMap> function_of(const SharpObservable& p, const Observable& m,
                                      const Tolerance& tol) {
    auto part = block_partition(p, m, tol);
    if (!part) return std::nullopt;

    // Zero atoms may map anywhere; send them to the heaviest target so the
    // extension is total and reproducible.
    int fallback = 0;
    double best_trace = -1.0;
    for (int y = 0; y < p.n_outcomes(); ++y) {
        double t = p.effects[y].trace().real();
        if (t > best_trace) {
            best_trace = t;
            fallback = y;
        }
    }
    std::map<std::string, std::string> assigned(part->assignment.begin(),
                                                part->assignment.end());
    OutcomeMap f;
    for (const std::string& x : m.outcomes) {
        auto it = assigned.find(x);
        f.emplace_back(x, it != assigned.end() ? it->second : p.outcomes[fallback]);
    }

    const double bound = m.n_outcomes() * tol.eps_eq;
    for (int y = 0; y < p.n_outcomes(); ++y) {
        CMat sum = CMat::Zero(m.dim, m.dim);
        for (int x = 0; x < m.n_outcomes(); ++x) {
            if (f[x].second == p.outcomes[y]) sum += m.effects[x];
        }
        double defect = operator_norm(sum - p.effects[y]);
        if (defect > bound) {
            throw povm_error(errc::numerical_breakdown,
                             "extension of the block map broke the preimage sums");
        }
    }
    return f;
}

LinearFeasibilityProblem kernel_feasibility_problem(const Observable& m, const Observable& n,
                                                    const Tolerance& tol) {
    if (m.dim != n.dim) {
        throw povm_error(errc::dimension_mismatch, "observables live on different spaces");
    }
    const int nx = m.n_outcomes();
    const int ny = n.n_outcomes();
    const int d = m.dim;

    LinearFeasibilityProblem prob;
    prob.num_vars = nx * ny;
    prob.bounds.assign(prob.num_vars, {0.0, 1.0});
    prob.description = "smearing kernel, " + std::to_string(nx) + " -> " + std::to_string(ny) +
                       " outcomes, dim " + std::to_string(d);

    // A genuine kernel satisfies its row sums exactly, so these rows get the
    // pivot-noise slack only. Leaving eps_kernel room here would let the
    // solver return boundary points that fail kernel validation downstream.
    for (int x = 0; x < nx; ++x) {
        LinearConstraint row;
        row.coeffs.assign(prob.num_vars, 0.0);
        for (int y = 0; y < ny; ++y) row.coeffs[x * ny + y] = 1.0;
        row.rhs = 1.0;
        row.slack = kRowSumSlack;
        prob.equalities.push_back(std::move(row));
    }

    std::vector<RVec> m_parts;
    m_parts.reserve(nx);
    for (const CMat& atom : m.effects) m_parts.push_back(hermitian_components(atom));
    for (int y = 0; y < ny; ++y) {
        RVec target = hermitian_components(n.effects[y]);
        for (int e = 0; e < d * d; ++e) {
            LinearConstraint eq;
            eq.coeffs.assign(prob.num_vars, 0.0);
            for (int x = 0; x < nx; ++x) eq.coeffs[x * ny + y] = m_parts[x](e);
            eq.rhs = target(e);
            eq.slack = tol.eps_kernel;
            prob.equalities.push_back(std::move(eq));
        }
    }
    return prob;
}

namespace {

/// Phase-1 stops at a vertex of the relaxed polytope, which generically
/// saturates some slack even when the equalities are exactly consistent. A
/// few least-squares corrections (clamped back into the box) move the point
/// onto the equality manifold; kept only when they improve the residual.
std::vector<double> polish_solution(const LinearFeasibilityProblem& prob,
                                    const std::vector<double>& start) {
    const auto rows = static_cast<Eigen::Index>(prob.equalities.size());
    const auto cols = static_cast<Eigen::Index>(prob.num_vars);
    if (rows == 0) return start;
    RMat a(rows, cols);
    RVec b(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        b(i) = prob.equalities[i].rhs;
        for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = prob.equalities[i].coeffs[j];
    }
    std::vector<double> x = start;
    Eigen::Map<RVec> xv(x.data(), cols);
    auto qr = a.colPivHouseholderQr();
    for (int pass = 0; pass < 3; ++pass) {
        RVec gap = b - a * xv;
        if (gap.cwiseAbs().maxCoeff() <= 1e-13) break;
        xv += qr.solve(gap);
        for (Eigen::Index j = 0; j < cols; ++j) {
            xv(j) = std::clamp(xv(j), prob.bounds[j].first, prob.bounds[j].second);
        }
    }
    return residual(prob, x) <= residual(prob, start) ? x : start;
}

}  // namespace

std::optional<MarkovKernel> find_kernel(const Observable& m, const Observable& n,
                                        const Tolerance& tol) {
    LinearFeasibilityProblem prob = kernel_feasibility_problem(m, n, tol);
    auto solution = solve_feasibility(prob, tol);
    if (!solution) return std::nullopt;
    solution = polish_solution(prob, *solution);

    // Indicator certificates should come out exact: snap near-bound entries
    // and keep the snap only if every equality still holds within slack.
    std::vector<double> snapped = *solution;
    bool any = false;
    for (double& v : snapped) {
        if (v != 0.0 && std::abs(v) <= kSnapWindow) {
            v = 0.0;
            any = true;
        } else if (v != 1.0 && std::abs(v - 1.0) <= kSnapWindow) {
            v = 1.0;
            any = true;
        }
    }
    if (any && residual(prob, snapped) <= tol.eps_kernel) solution = std::move(snapped);

    const int ny = n.n_outcomes();
    RMat weights(m.n_outcomes(), ny);
    for (int x = 0; x < m.n_outcomes(); ++x) {
        for (int y = 0; y < ny; ++y) weights(x, y) = (*solution)[x * ny + y];
    }
    MarkovKernel kernel{m.outcomes, n.outcomes, std::move(weights)};

    Observable back = smear(m, kernel, tol);
    double defect = 0.0;
    for (int y = 0; y < ny; ++y) {
        defect = std::max(defect, operator_norm(back.effects[y] - n.effects[y]));
    }
    if (defect > 10.0 * tol.eps_kernel) {
        throw povm_error(errc::numerical_breakdown,
                         "feasible kernel fails to reproduce the target, defect " +
                             std::to_string(defect));
    }
    return kernel;
}

bool preceq(const Observable& m, const Observable& n, const Tolerance& tol) {
    return find_kernel(m, n, tol).has_value();
}

bool equivalent(const Observable& m, const Observable& n, const Tolerance& tol) {
    return preceq(m, n, tol) && preceq(n, m, tol);
}

bool is_clean_sharp(const SharpObservable& p, const Tolerance& tol) {
    (void)tol;
    int rank_one = 0;
    for (const CMat& atom : p.effects) {
        // For a projection the trace is the rank.
        auto rank = std::llround(atom.trace().real());
        if (rank > 1) return false;
        if (rank == 1) ++rank_one;
    }
    return rank_one == p.dim;
}

SharpObservable finer_sharp(const SharpObservable& p, const Tolerance& tol) {
    if (is_clean_sharp(p, tol)) {
        throw povm_error(errc::already_clean, "every atom is already rank one");
    }
    SharpObservable f;
    f.dim = p.dim;
    for (int y = 0; y < p.n_outcomes(); ++y) {
        CMat basis = support_basis(p.effects[y], tol);
        for (int i = 0; i < basis.cols(); ++i) {
            f.outcomes.push_back(p.outcomes[y] + ":" + std::to_string(i));
            f.effects.push_back(basis.col(i) * basis.col(i).adjoint());
        }
    }
    return f;
}

PerturbationResult extremal_perturbation_check(const Observable& parent,
                                               const WeakMarkovKernel& nu,
                                               const std::vector<std::string>& b1,
                                               const Tolerance& tol) {
    if (nu.source != parent.outcomes) {
        throw povm_error(errc::invalid_kernel, "kernel source does not match parent outcomes");
    }
    ValidationReport report = validate_weak_kernel(nu.weights, parent, tol);
    if (!report.valid()) {
        throw povm_error(errc::invalid_kernel, report.violations.front().what);
    }
    std::vector<bool> in_b1(nu.target.size(), false);
    for (const std::string& label : b1) {
        auto it = std::find(nu.target.begin(), nu.target.end(), label);
        if (it == nu.target.end()) {
            throw povm_error(errc::unknown_outcome, "no target outcome '" + label + "'");
        }
        in_b1[it - nu.target.begin()] = true;
    }

    const int rows = static_cast<int>(nu.source.size());
    const int cols = static_cast<int>(nu.target.size());
    RMat plus = nu.weights;
    RMat minus = nu.weights;
    for (int s = 0; s < rows; ++s) {
        double w_b1 = 0.0;
        double w_rest = 0.0;
        for (int b = 0; b < cols; ++b) (in_b1[b] ? w_b1 : w_rest) += nu.weights(s, b);
        for (int b = 0; b < cols; ++b) {
            double bracket = in_b1[b] ? -w_rest * nu.weights(s, b) : w_b1 * nu.weights(s, b);
            plus(s, b) += bracket;
            minus(s, b) -= bracket;
        }
    }

    PerturbationResult result;
    result.nu_plus = WeakMarkovKernel{nu.source, nu.target, plus, parent};
    result.nu_minus = WeakMarkovKernel{nu.source, nu.target, minus, parent};
    for (int b = 0; b < cols; ++b) {
        CMat diff = CMat::Zero(parent.dim, parent.dim);
        for (int s = 0; s < rows; ++s) {
            diff += (plus(s, b) - minus(s, b)) * parent.effects[s];
        }
        result.defect = std::max(result.defect, operator_norm(diff));
    }
    return result;
}

bool is_extremal(const Observable& m, const Tolerance& tol) {
    const int d = m.dim;
    std::vector<CMat> bases;
    int params = 0;
    for (const CMat& atom : m.effects) {
        CMat v = support_basis(atom, tol);
        if (v.cols() == 0) continue;
        params += static_cast<int>(v.cols() * v.cols());
        bases.push_back(std::move(v));
    }
    if (params == 0) return true;

    // Columns are the realified contributions of a Hermitian basis on each
    // support; a nontrivial nullspace of the stacked map sum_x V H_x V† is
    // exactly a valid perturbation family.
    RMat a(d * d, params);
    int col = 0;
    for (const CMat& v : bases) {
        const int r = static_cast<int>(v.cols());
        auto emit = [&](const CMat& h) {
            a.col(col++) = hermitian_components(v * h * v.adjoint());
        };
        for (int i = 0; i < r; ++i) {
            CMat h = CMat::Zero(r, r);
            h(i, i) = 1.0;
            emit(h);
        }
        for (int i = 0; i < r; ++i) {
            for (int j = i + 1; j < r; ++j) {
                CMat h = CMat::Zero(r, r);
                h(i, j) = 1.0;
                h(j, i) = 1.0;
                emit(h);
                h(i, j) = Complex(0.0, 1.0);
                h(j, i) = Complex(0.0, -1.0);
                emit(h);
            }
        }
    }
    Eigen::JacobiSVD<RMat> svd(a);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()(i) > kExtremalRankFloor) ++rank;
    }
    return rank == params;
}

std::optional<OutcomeMap> find_indicator_kernel(const Observable& m, const Observable& n,
                                                const Tolerance& tol) {
    if (m.dim != n.dim) {
        throw povm_error(errc::dimension_mismatch, "observables live on different spaces");
    }
    if (is_sharp(n, tol)) {
        auto part = block_partition(as_sharp(n, tol), m, tol);
        if (!part) return std::nullopt;
        return part->assignment;
    }

    std::vector<int> live;
    std::vector<bool> in_null = zero_flags(m, tol);
    for (int x = 0; x < m.n_outcomes(); ++x) {
        if (!in_null[x]) live.push_back(x);
    }
    const int ny = n.n_outcomes();
    if (std::pow(static_cast<double>(ny), static_cast<double>(live.size())) > kAssignmentLimit) {
        throw povm_error(errc::too_large, "assignment enumeration exceeds 10^6 candidates");
    }

    const double bound = m.n_outcomes() * tol.eps_eq;
    std::vector<int> f(live.size(), 0);
    while (true) {
        bool ok = true;
        for (int y = 0; y < ny && ok; ++y) {
            CMat sum = CMat::Zero(m.dim, m.dim);
            for (size_t i = 0; i < live.size(); ++i) {
                if (f[i] == y) sum += m.effects[live[i]];
            }
            CMat diff = sum - n.effects[y];
            ok = diff.cwiseAbs().maxCoeff() <= bound && operator_norm(diff) <= bound;
        }
        if (ok) {
            OutcomeMap result;
            for (size_t i = 0; i < live.size(); ++i) {
                result.emplace_back(m.outcomes[live[i]], n.outcomes[f[i]]);
            }
            return result;
        }
        int pos = static_cast<int>(f.size()) - 1;
        while (pos >= 0 && ++f[pos] == ny) f[pos--] = 0;
        if (pos < 0) return std::nullopt;
    }
}

bool projection_commutes_check(const Observable& m, const Tolerance& tol) {
    const int n = m.n_outcomes();
    if (n > kSubsetLimit) {
        throw povm_error(errc::too_large, "subset enumeration beyond 2^" +
                                              std::to_string(kSubsetLimit) + " outcomes");
    }
    // Commuting with every atom spans commuting with every subset sum, so
    // testing atoms suffices and is the sharper check.
    auto clears = [&](const CMat& sum) {
        CMat square_gap = sum * sum - sum;
        if (square_gap.cwiseAbs().maxCoeff() > tol.eps_eq) return true;  // not a projection
        if (operator_norm(square_gap) > tol.eps_eq) return true;
        for (const CMat& atom : m.effects) {
            if (commutator_norm(sum, atom) > tol.eps_eq) return false;
        }
        return true;
    };

    CMat sum = CMat::Zero(m.dim, m.dim);
    if (!clears(sum)) return false;
    unsigned long prev = 0;
    for (unsigned long i = 1; i < (1UL << n); ++i) {
        unsigned long mask = i ^ (i >> 1);
        unsigned long flipped = mask ^ prev;
        int bit = std::countr_zero(flipped);
        if (mask & flipped) {
            sum += m.effects[bit];
        } else {
            sum -= m.effects[bit];
        }
        prev = mask;
        if (!clears(sum)) return false;
    }
    return true;
}

EquivalenceReport equivalence_suite(const SharpObservable& p, const Observable& m,
                                    const Tolerance& tol) {
    EquivalenceReport report;
    report.oracle_contains = brute_force_contains_range(p, m, tol);
    report.range_containment = contains_range(p, m, tol);
    report.indicator_kernel = find_indicator_kernel(m, p, tol).has_value();
    report.function_of_present = function_of(p, m, tol).has_value();
    report.markov_kernel = find_kernel(m, p, tol).has_value();
    return report;
}

}  // namespace povmkit
