#include <qdiv/io.hpp>
#include <qdiv/random.hpp>

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace qdiv;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("qdiv_io_" + name)).string();
}

std::string error_of(const Json& j) {
  try {
    parse_state_json(j);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("maximally mixed qubit") {
  const StateFile f = parse_state_json(Json::parse(R"({"dim": 2, "entries": [[0.5, 0], [0, 0.5]]})"));
  CHECK(f.state.matrix().isApprox(Matrix::Identity(2, 2) / 2.0));
  CHECK_FALSE(f.dims.has_value());
}

TEST_CASE("complex entries and dims") {
  const StateFile f = parse_state_json(Json::parse(
      R"({"dims": [2, 1], "entries": [[[0.5, 0], [0.25, -0.25]], [[0.25, 0.25], [0.5, 0]]]})"));
  CHECK(f.state(0, 1) == Complex(0.25, -0.25));
  CHECK(f.bipartite().dims().a == 2);
}

TEST_CASE("diagnostics name the violated invariant") {
  CHECK(error_of(Json::parse(R"({"entries": [[1.5, 0], [0, 0]]})")).find("trace 1.5") != std::string::npos);
  const std::string herm = error_of(Json::parse(R"({"entries": [[0.5, 0.1], [0, 0.5]]})"));
  CHECK(herm.find("not Hermitian") != std::string::npos);
  CHECK(herm.find("entry (0,1)") != std::string::npos);
  CHECK(error_of(Json::parse(R"({"entries": [[1.2, 0], [0, -0.2]]})")).find("eigenvalue -0.2") != std::string::npos);
  CHECK(error_of(Json::parse(R"({"entries": [[1, 0]]})")).find("not square") != std::string::npos);
  CHECK(error_of(Json::parse(R"({"dim": 3, "entries": [[1, 0], [0, 0]]})")).find("dim") != std::string::npos);
  CHECK(error_of(Json::parse(R"({"dims": [3, 2], "entries": [[1, 0], [0, 0]]})")).find("dims") != std::string::npos);
  CHECK(error_of(Json::parse(R"({"entries": [[1, 0], [0]]})")).find("row 1") != std::string::npos);
  CHECK(error_of(Json::parse(R"([1, 2])")).find("object") != std::string::npos);
}

TEST_CASE("small defects are repaired") {
  // Trace within 1e-8 of one is rescaled; tiny negative eigenvalues are clipped.
  const StateFile f = parse_state_json(Json::parse(R"({"entries": [[0.500000004, 0], [0, 0.500000004]]})"));
  CHECK(f.state.trace() == doctest::Approx(1.0).epsilon(1e-14));
  const StateFile g = parse_state_json(Json::parse(R"({"entries": [[1.0, 0], [0, -1e-9]]})"));
  CHECK(g.state.matrix().real().minCoeff() >= 0.0);
}

TEST_CASE("round trip through a file") {
  Rng rng(1);
  const DensityOperator r = random_density(4, 3, rng);
  const std::string path = temp_path("roundtrip.json");
  write_json_file(path, state_to_json(r.matrix(), Dims{2, 2}));
  const StateFile back = parse_state_file(path);
  CHECK((back.state.matrix() - r.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  REQUIRE(back.dims.has_value());
  CHECK(back.dims->b == 2);
  std::remove(path.c_str());
}

TEST_CASE("file errors carry the path") {
  const std::string missing = temp_path("does_not_exist.json");
  CHECK_THROWS_WITH_AS(parse_state_file(missing), doctest::Contains(missing.c_str()), ValidationError);
  const std::string bad = temp_path("malformed.json");
  std::ofstream(bad) << "{ not json";
  CHECK_THROWS_WITH_AS(parse_state_file(bad), doctest::Contains("malformed JSON"), ValidationError);
  std::remove(bad.c_str());
}

TEST_CASE("channels round trip") {
  const QuantumChannel c = random_channel(2, 3, 1, 5);
  const QuantumChannel back = parse_channel_json(channel_to_json(c));
  REQUIRE(back.kraus().size() == c.kraus().size());
  for (std::size_t k = 0; k < c.kraus().size(); ++k) CHECK(back.kraus()[k] == c.kraus()[k]);
  CHECK_THROWS_AS(parse_channel_json(Json::parse(R"({"kraus": []})")), ValidationError);
}

TEST_CASE("divergence values") {
  CHECK(to_json(DivergenceValue::of(0.5)) == Json(0.5));
  CHECK(to_json(DivergenceValue::infinite()) == Json("inf"));
}

}  // TEST_SUITE
