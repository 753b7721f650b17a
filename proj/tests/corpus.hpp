#pragma once

#include "cdineq/newton.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace corpus {

struct Sample {
  std::uint32_t p = 101;
  cdineq::BiPoly f;
  std::int64_t expected = -1;  // known answer when the construction gives one
  std::vector<int> branches;   // orbit sizes of the planted branches, if any
};

// Product of random factors plus occasional perturbations; squarefree,
// degree <= 8, t-degree <= 4, p in {11, 13, 101}.
std::vector<Sample> random_corpus(std::size_t count, std::uint64_t seed);

// Linear and shifted Eisenstein factors at distinct residues; expected is
// the sum of (degree - 1) over the factors.
std::vector<Sample> base_case_corpus(std::size_t count, std::uint64_t seed);

// At least four irreducible factors through one point.
std::vector<Sample> collision_corpus(std::size_t count, std::uint64_t seed);

// Minimal polynomial of a random Puiseux series of valuation < 1 at 0;
// with `pairs` two such branches are multiplied.
std::vector<Sample> branch_corpus(std::size_t count, std::uint64_t seed, bool pairs);

// prod over conjugates of (x - eta), eta in t^{1/n} over F_p, as exact polynomial
cdineq::BiPoly minimal_polynomial(std::uint32_t p, const std::vector<std::pair<std::int64_t, std::int64_t>>& terms,
                                  std::int64_t n);

bool squarefree(const Sample& s);

}  // namespace corpus
