#pragma once

#include <cstdint>
#include <random>

#include "povmkit/kernels.hpp"
#include "povmkit/observables.hpp"

namespace povmkit {

/// Deterministic random source. mt19937_64 is fully specified by the
/// standard; the distribution mappings are written out here because the
/// std::*_distribution adaptors are implementation-defined and would break
/// the byte-identical-reports contract across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);
    /// Standard normal via Box-Muller.
    double normal();
    /// Uniform integer on [lo, hi] inclusive.
    int uniform_int(int lo, int hi);

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// d x d matrix with iid standard complex Gaussian entries.
CMat random_ginibre(Rng& rng, int d);

/// Haar-distributed unitary: QR of a Ginibre matrix with the R-diagonal
/// phases absorbed into Q.
CMat random_unitary(Rng& rng, int d);

/// Hermitian matrix (G + G†)/2 with G Ginibre.
CMat random_hermitian(Rng& rng, int d);

/// Random density matrix G·G† normalized to unit trace.
State random_state(Rng& rng, int d);

/// PVM with k outcomes on C^d (1 <= k <= d): eigenprojections of a random
/// Hermitian matrix, with eigenvectors grouped into k blocks to force
/// degeneracy when k < d. Outcome labels x1..xk.
SharpObservable random_pvm(Rng& rng, int d, int k);

/// POVM with k outcomes on C^d: scaled random rank-1 effects completed with
/// I - sum; redrawn until the completion validates.
Observable random_povm(Rng& rng, int d, int k);

/// Commutative POVM with k outcomes: smear of a random PVM by a random
/// stochastic kernel.
Observable random_commutative_povm(Rng& rng, int d, int k);

/// Row-stochastic kernel with the given outcome labels; rows are uniform on
/// the probability simplex (normalized exponentials).
MarkovKernel random_kernel(Rng& rng, std::vector<std::string> source,
                           std::vector<std::string> target);
MarkovKernel random_kernel(Rng& rng, int n_source, int n_target);

/// A sharp observable P, an observable M refining it block by block, and the
/// map sending each M outcome to the P outcome whose block it lives in. By
/// construction sum over a block of M equals P(y) up to rounding, so every
/// range-containment procedure must report containment.
struct BlockInstance {
    SharpObservable sharp;
    Observable refined;
    std::vector<std::pair<std::string, std::string>> block_of;
};

BlockInstance random_block_instance(Rng& rng, int d, int n_blocks, int n_atoms);

/// eta * M + (1 - eta) * (rank/d) * I per atom: keeps normalization, makes
/// every nonzero atom full rank, and so empties the range of projections.
Observable depolarize(const Observable& m, double eta);

}  // namespace povmkit
