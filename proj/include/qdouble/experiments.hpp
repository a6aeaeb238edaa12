// Copyright 2026 The qdouble Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QDOUBLE_EXPERIMENTS_HPP_
#define QDOUBLE_EXPERIMENTS_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qdouble/group.hpp"
#include "qdouble/lattice.hpp"
#include "qdouble/report.hpp"

namespace qd {

class UnknownExperiment : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// verify, groundstate, haag-check, split-check, fusion, braid, smatrix.
const std::vector<std::string>& experiment_names();

// Worker cap: QDL_THREADS if set to a positive integer, else the hardware
// concurrency (at least 1).
int worker_count();

// Runs independent jobs on up to `threads` workers; results keep job order.
std::vector<Check> run_parallel(const std::vector<std::function<Check()>>& jobs, int threads);

// Exact operator identities of the ribbon calculus on a (small) lattice:
// star/plaquette algebra, endpoint relations, product and adjoint rules,
// disjoint and closed ribbon commutation, irrep endpoint relations, the
// trivial-charge criterion, irrep decomposition and the crossing relation.
// Ribbons are drawn with the seed; every label combination is exhausted.
std::vector<Check> identity_suite(const Lattice& lat, const AbelianGroup& g, double tol, std::uint64_t seed,
                                  int threads = 1);

// Dispatches on config.experiment. Throws UnknownExperiment, ParseError or
// GeometryError (with context) for bad input.
Report run(const RunConfig& config);

}  // namespace qd

#endif  // QDOUBLE_EXPERIMENTS_HPP_
