#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "povmkit/observables.hpp"

namespace fixtures {

using povmkit::CMat;
using povmkit::Complex;

inline CMat pauli_x() {
    CMat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline CMat pauli_y() {
    CMat m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

inline CMat pauli_z() {
    CMat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline povmkit::Observable make_observable(int dim, std::vector<std::string> outcomes,
                                           std::vector<CMat> effects) {
    povmkit::Observable m;
    m.dim = dim;
    m.outcomes = std::move(outcomes);
    m.effects = std::move(effects);
    return m;
}

/// The z-basis measurement on a qubit, outcomes "+" and "-".
inline povmkit::SharpObservable sigma_z_pvm() {
    povmkit::SharpObservable p;
    p.dim = 2;
    p.outcomes = {"+", "-"};
    CMat up = CMat::Zero(2, 2);
    up(0, 0) = 1.0;
    CMat down = CMat::Zero(2, 2);
    down(1, 1) = 1.0;
    p.effects = {up, down};
    return p;
}

/// The unsharp z measurement eta * P(b) + (1 - eta)/2 * I.
inline povmkit::Observable noisy_qubit(double eta) {
    povmkit::SharpObservable p = sigma_z_pvm();
    povmkit::Observable m;
    m.dim = 2;
    m.outcomes = p.outcomes;
    for (const CMat& atom : p.effects) {
        m.effects.push_back(eta * atom + (1.0 - eta) * 0.5 * CMat::Identity(2, 2));
    }
    return m;
}

/// Three symmetric rank-1 effects (2/3)|phi_k><phi_k| at 120 degrees; the
/// standard example of a POVM with non-commutative range.
inline povmkit::Observable trine_povm() {
    povmkit::Observable m;
    m.dim = 2;
    m.outcomes = {"t0", "t1", "t2"};
    for (int k = 0; k < 3; ++k) {
        double angle = 2.0 * std::numbers::pi * k / 3.0;
        Eigen::Vector2cd phi(std::cos(angle), std::sin(angle));
        m.effects.push_back((2.0 / 3.0) * (phi * phi.adjoint()));
    }
    return m;
}

/// A diagonal 3-level observable refining a two-block sharp observable:
/// atoms a, b live in the first block and c is the second block.
inline povmkit::Observable diagonal_refinement() {
    CMat a = CMat::Zero(3, 3);
    a(0, 0) = 0.5;
    a(1, 1) = 0.2;
    CMat b = CMat::Zero(3, 3);
    b(0, 0) = 0.5;
    b(1, 1) = 0.8;
    CMat c = CMat::Zero(3, 3);
    c(2, 2) = 1.0;
    return make_observable(3, {"a", "b", "c"}, {a, b, c});
}

/// The coarse sharp observable the refinement above reproduces blockwise.
inline povmkit::SharpObservable diagonal_blocks() {
    povmkit::SharpObservable p;
    p.dim = 3;
    p.outcomes = {"p", "q"};
    CMat first = CMat::Zero(3, 3);
    first(0, 0) = 1.0;
    first(1, 1) = 1.0;
    CMat second = CMat::Zero(3, 3);
    second(2, 2) = 1.0;
    p.effects = {first, second};
    return p;
}

/// Largest absolute entry of a - b; exact zero means bit-identical values.
inline double max_abs_diff(const CMat& a, const CMat& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace fixtures
