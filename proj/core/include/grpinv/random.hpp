#pragma once

#include <cstdint>
#include <random>

#include "grpinv/matrix.hpp"

namespace grpinv {

using Engine = std::mt19937_64;

// SplitMix64 mix of (master, stream); used to give every instance and every
// sub-block an independent, reproducible stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Entries with independent N(0, 1/2) real and imaginary parts.
ComplexMatrix random_general(Index rows, Index cols, std::uint64_t seed);
ComplexMatrix random_general(Index rows, Index cols, Engine& engine);

// Haar-distributed unitary (QR of a Gaussian matrix with phase correction).
ComplexMatrix random_unitary(Index n, std::uint64_t seed);

// U * diag(sigma) * V^* with sigma_max = 1 and sigma_max / sigma_min strictly
// below cond_bound. Requires n >= 1 and cond_bound > 1.
ComplexMatrix random_invertible(Index n, double cond_bound, std::uint64_t seed);

}  // namespace grpinv
