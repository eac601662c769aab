#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bomtsp/errors.hpp"
#include "bomtsp/instance.hpp"

using namespace bomtsp;

TEST_CASE("euclidean rounding") {
  CHECK(euc2d_cost(0, 0, 3, 4) == 5);
  CHECK(euc2d_cost(0, 0, 1, 1) == 1);   // sqrt(2) rounds down
  CHECK(ceil2d_cost(0, 0, 1, 1) == 2);  // and ceils up
  CHECK(euc2d_cost(0, 0, 0, 0) == 0);
  CHECK(euc2d_cost(10, 20, 10, 20.5) == 1);  // nearest, not truncation
}

TEST_CASE("geo distance follows the great-circle convention") {
  // Hand-computed: 38.24/20.42 vs 39.57/26.15 in degree.minute form gives
  // arc 0.079775 rad on radius 6378.388, truncated after adding 1.
  const double lat1 = geo_to_radians(38.24), lng1 = geo_to_radians(20.42);
  const double lat2 = geo_to_radians(39.57), lng2 = geo_to_radians(26.15);
  CHECK(geo_cost(lat1, lng1, lat2, lng2) == 509);
  // Self-distance is 1 under this convention: int(0 * RRR + 1.0).
  CHECK(geo_cost(lat1, lng1, lat1, lng1) == 1);
}

static Instance from_text(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  return parse_tsplib(in, name);
}

TEST_CASE("tsplib coordinate parsing") {
  const Instance inst = from_text(
      "NAME : tiny\n"
      "TYPE : TSP\n"
      "DIMENSION : 3\n"
      "EDGE_WEIGHT_TYPE : EUC_2D\n"
      "NODE_COORD_SECTION\n"
      "1 0 0\n"
      "2 3 4\n"
      "3 0 8\n"
      "EOF\n",
      "tiny");
  CHECK(inst.n == 3);
  CHECK(inst.kind == MetricKind::kEuclid2D);
  CHECK(inst.cost(0, 1) == 5);
  CHECK(inst.cost(1, 2) == 5);
  CHECK(inst.cost(0, 2) == 8);
  CHECK(inst.tour_cost({0, 1, 2}) == 18);
}

TEST_CASE("explicit matrix formats agree") {
  const Instance full = from_text(
      "DIMENSION : 3\n"
      "EDGE_WEIGHT_TYPE : EXPLICIT\n"
      "EDGE_WEIGHT_FORMAT : FULL_MATRIX\n"
      "EDGE_WEIGHT_SECTION\n"
      "0 2 4\n"
      "2 0 3\n"
      "4 3 0\n",
      "full");
  const Instance upper = from_text(
      "DIMENSION : 3\n"
      "EDGE_WEIGHT_TYPE : EXPLICIT\n"
      "EDGE_WEIGHT_FORMAT : UPPER_ROW\n"
      "EDGE_WEIGHT_SECTION\n"
      "2 4\n"
      "3\n",
      "upper");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(full.cost(i, j) == upper.cost(i, j));
}

TEST_CASE("graph instances use hop-count metric on the largest component") {
  std::istringstream in(
      "# two components\n"
      "1 2\n"
      "2 3\n"
      "3 4\n"
      "4 1\n"
      "9 10\n");
  const Instance inst = parse_graph_edges(in, "ring");
  CHECK(inst.n == 4);
  CHECK(inst.kind == MetricKind::kGraph);
  CHECK(inst.cost(0, 1) == 1);
  CHECK(inst.cost(0, 2) == 2);  // across the 4-cycle
  CHECK(inst.graph_edges.size() == 4);
  CHECK(inst.label(0) == 1);
}

TEST_CASE("write then load round trip with an opt sidecar") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "bomtsp_inst_rt";
  fs::create_directories(dir);

  Instance inst;
  inst.name = "rt";
  inst.kind = MetricKind::kEuclid2D;
  inst.n = 4;
  inst.xs = {0, 100, 100, 0};
  inst.ys = {0, 0, 100, 100};
  inst.labels = {1, 2, 3, 4};

  const std::string tsp = (dir / "rt.tsp").string();
  {
    std::ofstream out(tsp);
    write_tsplib(out, inst);
  }
  {
    std::ofstream out((dir / "rt.opt").string());
    out << "400\n";
  }
  const Instance back = load_instance(tsp);
  CHECK(back.n == 4);
  CHECK(back.has_opt);
  CHECK(back.opt == 400.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(back.cost(i, j) == inst.cost(i, j));
  fs::remove_all(dir);
}

TEST_CASE("tour files round trip and validate") {
  const Instance inst = from_text(
      "DIMENSION : 4\n"
      "EDGE_WEIGHT_TYPE : EUC_2D\n"
      "NODE_COORD_SECTION\n"
      "1 0 0\n"
      "2 10 0\n"
      "3 10 10\n"
      "4 0 10\n",
      "sq");
  std::ostringstream out;
  write_tour(out, inst, {0, 2, 1, 3}, 0.0);
  std::istringstream in(out.str());
  CHECK(parse_tour(in, inst) == std::vector<int>{0, 2, 1, 3});

  std::istringstream dup("1\n1\n2\n3\n");
  CHECK_THROWS_AS(parse_tour(dup, inst), InputError);
  std::istringstream shortt("1\n2\n");
  CHECK_THROWS_AS(parse_tour(shortt, inst), InputError);
}

TEST_CASE("malformed inputs are rejected") {
  CHECK_THROWS_AS(from_text("TYPE : TSP\n", "x"), InputError);
  CHECK_THROWS_AS(
      from_text("DIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_3D\n"
                "NODE_COORD_SECTION\n1 0 0\n2 1 1\n3 2 2\n",
                "x"),
      InputError);
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(parse_graph_edges(empty, "x"), InputError);
}
