#include "povmkit/random_instances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "povmkit/operator_core.hpp"

namespace povmkit {

double Rng::uniform() {
    // 53-bit mantissa scaling; avoids the implementation-defined
    // std::uniform_real_distribution.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    do {
        u = uniform();
    } while (u == 0.0);
    double v = uniform();
    double r = std::sqrt(-2.0 * std::log(u));
    double angle = 2.0 * std::numbers::pi * v;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
}

int Rng::uniform_int(int lo, int hi) {
    if (lo > hi) throw povm_error(errc::invalid_parameters, "empty integer range");
    auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    // Rejection sampling for an unbiased draw.
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / span * span;
    std::uint64_t x = 0;
    do {
        x = engine_();
    } while (x >= limit);
    return lo + static_cast<int>(x % span);
}

namespace {

std::vector<std::string> numbered_labels(const std::string& prefix, int n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (int i = 1; i <= n; ++i) labels.push_back(prefix + std::to_string(i));
    return labels;
}

// Splits {0, .., d-1} into k nonempty consecutive groups at random cut points.
std::vector<std::pair<int, int>> random_groups(Rng& rng, int d, int k) {
    std::vector<int> cuts;
    std::vector<int> interior;
    for (int i = 1; i < d; ++i) interior.push_back(i);
    for (int j = 0; j < k - 1; ++j) {
        int pick = rng.uniform_int(0, static_cast<int>(interior.size()) - 1);
        cuts.push_back(interior[pick]);
        interior.erase(interior.begin() + pick);
    }
    cuts.push_back(0);
    cuts.push_back(d);
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::pair<int, int>> groups;
    for (size_t j = 0; j + 1 < cuts.size(); ++j) groups.emplace_back(cuts[j], cuts[j + 1]);
    return groups;
}

void check_generator_args(int d, int k) {
    if (d < 1 || k < 1) throw povm_error(errc::invalid_parameters, "dim and outcomes must be >= 1");
}

}  // namespace

CMat random_ginibre(Rng& rng, int d) {
    check_generator_args(d, 1);
    CMat g(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
    }
    return g;
}

CMat random_unitary(Rng& rng, int d) {
    CMat g = random_ginibre(rng, d);
    Eigen::HouseholderQR<CMat> qr(g);
    CMat q = qr.householderQ();
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the gauge so the factorization is the unique one with positive
    // R-diagonal; otherwise Q depends on Householder sign conventions.
    for (int j = 0; j < d; ++j) {
        Complex rj = r(j, j);
        double mag = std::abs(rj);
        Complex phase = mag > 0.0 ? rj / mag : Complex(1.0, 0.0);
        q.col(j) *= phase;
    }
    return q;
}

CMat random_hermitian(Rng& rng, int d) {
    CMat g = random_ginibre(rng, d);
    return 0.5 * (g + g.adjoint());
}

State random_state(Rng& rng, int d) {
    CMat g = random_ginibre(rng, d);
    CMat rho = g * g.adjoint();
    rho /= rho.trace().real();
    return State{d, std::move(rho)};
}

SharpObservable random_pvm(Rng& rng, int d, int k) {
    check_generator_args(d, k);
    if (k > d) throw povm_error(errc::invalid_parameters, "a PVM on C^d has at most d outcomes");
    CMat basis = hermitian_eig(random_hermitian(rng, d)).eigenvectors;
    SharpObservable p;
    p.dim = d;
    p.outcomes = numbered_labels("x", k);
    for (auto [lo, hi] : random_groups(rng, d, k)) {
        CMat block = basis.middleCols(lo, hi - lo);
        p.effects.push_back(block * block.adjoint());
    }
    return p;
}

Observable random_povm(Rng& rng, int d, int k) {
    check_generator_args(d, k);
    Observable m;
    m.dim = d;
    m.outcomes = numbered_labels("x", k);
    if (k == 1) {
        m.effects.push_back(CMat::Identity(d, d));
        return m;
    }
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<CMat> atoms;
        CMat total = CMat::Zero(d, d);
        for (int j = 0; j + 1 < k; ++j) {
            CMat v(d, 1);
            for (int i = 0; i < d; ++i) v(i, 0) = Complex(rng.normal(), rng.normal());
            v /= v.norm();
            CMat atom = rng.uniform(0.1, 1.0) * (v * v.adjoint());
            atoms.push_back(atom);
            total += atom;
        }
        // Scale the rank-1 family below the identity, then complete.
        double scale = rng.uniform(0.2, 0.9) / operator_norm(total);
        m.effects.clear();
        CMat sum = CMat::Zero(d, d);
        for (CMat& atom : atoms) {
            atom *= scale;
            m.effects.push_back(atom);
            sum += atom;
        }
        m.effects.push_back(CMat::Identity(d, d) - sum);
        if (validate(m).valid()) return m;
    }
    throw povm_error(errc::numerical_breakdown, "random POVM rejection sampling failed");
}

Observable random_commutative_povm(Rng& rng, int d, int k) {
    check_generator_args(d, k);
    SharpObservable p = random_pvm(rng, d, rng.uniform_int(1, d));
    MarkovKernel nu = random_kernel(rng, p.outcomes, numbered_labels("x", k));
    return smear(p, nu);
}

MarkovKernel random_kernel(Rng& rng, std::vector<std::string> source,
                           std::vector<std::string> target) {
    auto rows = static_cast<int>(source.size());
    auto cols = static_cast<int>(target.size());
    check_generator_args(rows, cols);
    RMat w(rows, cols);
    for (int i = 0; i < rows; ++i) {
        // Exponential draws normalized to a simplex point (flat Dirichlet).
        double sum = 0.0;
        for (int j = 0; j < cols; ++j) {
            w(i, j) = -std::log(1.0 - rng.uniform());
            sum += w(i, j);
        }
        for (int j = 0; j < cols; ++j) w(i, j) /= sum;
    }
    return MarkovKernel{std::move(source), std::move(target), std::move(w)};
}

MarkovKernel random_kernel(Rng& rng, int n_source, int n_target) {
    return random_kernel(rng, numbered_labels("x", n_source), numbered_labels("y", n_target));
}

BlockInstance random_block_instance(Rng& rng, int d, int n_blocks, int n_atoms) {
    check_generator_args(d, n_blocks);
    if (n_blocks > d) throw povm_error(errc::invalid_parameters, "more blocks than dimensions");
    if (n_atoms < n_blocks) throw povm_error(errc::invalid_parameters, "fewer atoms than blocks");

    for (int attempt = 0; attempt < 100; ++attempt) {
        CMat u = random_unitary(rng, d);
        auto groups = random_groups(rng, d, n_blocks);

        // Hand out atom counts: one per block, remainder spread at random.
        std::vector<int> atoms_in(n_blocks, 1);
        for (int extra = 0; extra < n_atoms - n_blocks; ++extra) {
            ++atoms_in[rng.uniform_int(0, n_blocks - 1)];
        }

        BlockInstance inst;
        inst.sharp.dim = d;
        inst.refined.dim = d;
        inst.sharp.outcomes = numbered_labels("y", n_blocks);
        inst.refined.outcomes = numbered_labels("x", n_atoms);

        int next_atom = 0;
        bool degenerate = false;
        for (int y = 0; y < n_blocks; ++y) {
            auto [lo, hi] = groups[y];
            int r = hi - lo;
            CMat block = u.middleCols(lo, r);
            inst.sharp.effects.push_back(block * block.adjoint());

            // Sub-POVM on the block: slice an isometry C^r -> C^(m*r) into m
            // square pieces W_a; the atoms W_a† W_a sum to the identity on
            // the block up to unitary round-off only.
            int m_atoms = atoms_in[y];
            CMat iso = random_unitary(rng, m_atoms * r).leftCols(r);
            for (int a = 0; a < m_atoms; ++a) {
                CMat w = iso.middleRows(a * r, r);
                CMat atom = block * (w.adjoint() * w) * block.adjoint();
                if (operator_norm(atom) < 1e-3) degenerate = true;
                inst.refined.effects.push_back(0.5 * (atom + atom.adjoint()));
                inst.block_of.emplace_back(inst.refined.outcomes[next_atom++],
                                           inst.sharp.outcomes[y]);
            }
            if (degenerate) break;
        }
        if (!degenerate) return inst;
    }
    throw povm_error(errc::numerical_breakdown, "block instance rejection sampling failed");
}

Observable depolarize(const Observable& m, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw povm_error(errc::invalid_parameters, "eta must lie in [0, 1]");
    }
    Observable noisy = m;
    for (CMat& atom : noisy.effects) {
        double weight = atom.trace().real() / m.dim;
        atom = eta * atom + (1.0 - eta) * weight * CMat::Identity(m.dim, m.dim);
    }
    return noisy;
}

}  // namespace povmkit
