#pragma once

#include <cstdint>
#include <vector>

#include "recad/cad_model.hpp"

namespace recad::geom {

/// `n` points on the boundary of the boolean result. Candidates are drawn
/// area-weighted from the SE prism meshes and kept when membership differs
/// across the triangle plane (offset 1e-4 of the model diagonal along the
/// triangle normal). Candidate k uses an RNG seeded from (seed, k), so the
/// result depends only on the inputs. Throws Error{kEmptySolid} when too few
/// candidates survive.
std::vector<Vec3> sample_surface(const CADModel& model, std::size_t n, std::uint64_t seed,
                                 double chord_tol = 0.0);

/// Counter-based 64-bit mixer used for all seeded draws.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

/// Uniform double in [0, 1) from a 64-bit value.
double unit_double(std::uint64_t bits);

}  // namespace recad::geom
