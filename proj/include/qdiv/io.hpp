#pragma once

// JSON files for states and channels:
//   {"dim": d, "entries": [[[re, im], ...], ...], "dims": [dA, dB]}
//   {"in_dim": m, "out_dim": n, "kraus": [entries, ...]}
// "dims" is optional and marks a bipartite state.

#include <qdiv/divergences.hpp>

#include <json.hpp>

#include <optional>
#include <string>

namespace qdiv {

using Json = nlohmann::json;

struct StateFile {
  DensityOperator state;
  std::optional<Dims> dims;

  BipartiteState bipartite() const;  // throws ValidationError without dims
};

/// Validates Hermiticity (1e-9), positivity (-1e-8) and trace (<= 1 + 1e-8)
/// with messages naming the failed check and the worst entry, then
/// symmetrizes, clips the small negative eigenvalues and rescales a trace in
/// (1, 1 + 1e-8] to one.
StateFile parse_state_json(const Json& j, const std::string& context = "state");
StateFile parse_state_file(const std::string& path);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& entries, const std::string& context);
Json state_to_json(const Matrix& m, const std::optional<Dims>& dims = std::nullopt);
void write_json_file(const std::string& path, const Json& j);

QuantumChannel parse_channel_json(const Json& j, const std::string& context = "channel");
Json channel_to_json(const QuantumChannel& channel);

/// Finite values as numbers, +inf as the string "inf".
Json to_json(const DivergenceValue& v);

}  // namespace qdiv
