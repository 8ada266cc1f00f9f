#pragma once

// Verification instances: a symmetric seed relation, a boundary triplet
// choice and a rational parameter, with JSON (de)serialization.
//
// JSON layout: complex numbers are [re, im], matrices are row-major arrays
// of rows. A matrix with zero rows is written as [] and takes its column
// count from the surrounding fields.

#include <cstdint>
#include <json.hpp>

#include "relext/nevanlinna.hpp"
#include "relext/triplet.hpp"

namespace relext {

using Json = nlohmann::json;

enum class TripletKind { von_neumann, explicit_maps };

struct Instance {
  Index n = 0;
  Matrix seed_span = Matrix(0, 0);  // 2n x r, spans A
  TripletKind kind = TripletKind::von_neumann;
  Matrix V = Matrix(0, 0);          // d x d unitary, von_neumann only
  Matrix gamma0 = Matrix(0, 0);     // d x 2n, explicit_maps only
  Matrix gamma1 = Matrix(0, 0);
  TauCoefficients tau;
  double tol = kDefaultTol;
};

struct Materialized {
  BoundaryTriplet triplet;
  RationalNevanlinna tau;
};

// Throws InputError naming the first problem found.
Materialized materialize(const Instance& inst);

Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, Index cols_if_empty = 0);

Json to_json(const Instance& inst);
// Throws InputError on malformed documents.
Instance instance_from_json(const Json& j);

Json model_dump(const Matrix& a_tilde_frame, Index dim_H, Index dim_Hr);

struct GenBounds {
  Index max_dim = 6;
  Index max_boundary = 3;
  Index max_poles = 3;
};

// Instance shapes that force each side of the compression flags.
enum class Profile { general, positive_B, no_B_no_K, trivial_boundary, with_K };
inline constexpr int kProfileCount = 5;
const char* to_string(Profile p);

Instance generate_instance(const GenBounds& bounds, std::uint64_t seed, Profile profile);

}  // namespace relext
