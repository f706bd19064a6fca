#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "revmine/embedding.hpp"
#include "revmine/types.hpp"

using namespace revmine;

namespace {

// Expected component-wise sum for the 30-token recipe below against the
// checked-in fixture table, computed once with an independent script that
// looks up and sums the raw file rows (27 of 30 tokens are in-vocabulary).
constexpr double kRecipe30Sum[50] = {
    -1.4570312500, -1.9931640625, -0.6582031250, -1.8437500000, -2.7343750000,
    -1.2744140625, 5.4765625000,  2.2099609375,  1.5390625000,  0.2353515625,
    -4.0039062500, 4.8662109375,  -5.2109375000, -3.1601562500, 3.2500000000,
    1.8427734375,  -3.3828125000, 3.4970703125,  1.2363281250,  -6.5693359375,
    -3.2753906250, -3.8916015625, -1.3164062500, -3.1845703125, 1.5722656250,
    -0.0703125000, -2.4003906250, 4.4355468750,  0.6669921875,  0.4755859375,
    -2.3837890625, -1.1337890625, -5.3974609375, 0.1054687500,  -1.5419921875,
    -1.1464843750, 2.1914062500,  -3.3818359375, -0.3701171875, 3.4726562500,
    1.5673828125,  -0.3154296875, -1.9531250000, -2.4531250000, -2.0888671875,
    0.5615234375,  -2.1298828125, 3.7382812500,  0.6503906250,  0.6503906250,
};

constexpr const char* kRecipe30 =
    "Cook the pasta in a pot of boiling hot water. Add salt and olive oil, "
    "then stir. Drain the noodles and serve with tomato sauce, garlic and "
    "pepper. Taste it!";

VectorStore fixture_store() {
  return load_store(revtest::data_dir() / "mini_vectors_50d.txt", 50);
}

TextVector vec(std::vector<double> components) {
  TextVector v;
  v.components = std::move(components);
  return v;
}

}  // namespace

TEST_CASE("load_store reads the standard one-word-per-line format") {
  std::istringstream in("the 0.1 0.2 0.3\nand 1 2 3\n");
  const VectorStore store = parse_store(in, 3);
  CHECK(store.table.size() == 2);
  REQUIRE(store.lookup("the") != nullptr);
  CHECK((*store.lookup("the"))[1] == doctest::Approx(0.2));
}

TEST_CASE("empty vector file gives an empty store and zero embeddings") {
  std::istringstream in("");
  const VectorStore store = parse_store(in, 50);
  CHECK(store.table.empty());
  const auto v = embed_text(preprocess("any text at all"), store);
  CHECK(v.is_zero());
  CHECK(v.matched_tokens == 0);
}

TEST_CASE("dimension mismatch is a format error naming the line") {
  std::istringstream in("the 0.1 0.2 0.3\nshort 0.1 0.2\n");
  try {
    parse_store(in, 3);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("duplicate words keep the first occurrence") {
  std::istringstream in("w 1 1\nw 9 9\n");
  const VectorStore store = parse_store(in, 2);
  CHECK((*store.lookup("w"))[0] == 1.0);
}

TEST_CASE("lookup is case-normalized") {
  std::istringstream in("The 1 2\n");
  const VectorStore store = parse_store(in, 2);
  CHECK(store.lookup("THE") != nullptr);
  CHECK(store.lookup("the") != nullptr);
}

TEST_CASE("preprocess strips punctuation and lowercases") {
  CHECK(preprocess("a) Cook the pasta!") ==
        std::vector<std::string>{"a", "cook", "the", "pasta"});
  CHECK(preprocess("") == std::vector<std::string>{});
  CHECK(preprocess("Stir-fry 2 eggs") ==
        std::vector<std::string>{"stirfry", "2", "eggs"});
  CHECK(preprocess("  \t \n ") == std::vector<std::string>{});
  CHECK(preprocess("...!!!") == std::vector<std::string>{});
}

TEST_CASE("embed_text of no tokens is the zero vector") {
  const VectorStore store = fixture_store();
  const auto v = embed_text({}, store);
  CHECK(v.is_zero());
  CHECK(v.matched_tokens == 0);
  CHECK(v.total_tokens == 0);
}

TEST_CASE("embed_text sums repeated tokens") {
  std::istringstream in("w 1.5 -2 0.25\n");
  const VectorStore store = parse_store(in, 3);
  const std::vector<std::string> tokens{"w", "w"};
  const auto v = embed_text(tokens, store);
  CHECK(v.components == std::vector<double>{3.0, -4.0, 0.5});
  CHECK(v.matched_tokens == 2);
}

TEST_CASE("embed_text skips out-of-vocabulary tokens") {
  std::istringstream in("w 1 1\n");
  const VectorStore store = parse_store(in, 2);
  const std::vector<std::string> tokens{"w", "missing", "w"};
  const auto v = embed_text(tokens, store);
  CHECK(v.matched_tokens == 2);
  CHECK(v.total_tokens == 3);
  CHECK(v.components == std::vector<double>{2.0, 2.0});
}

TEST_CASE("30-token recipe embedding matches the independent oracle") {
  const VectorStore store = fixture_store();
  const auto tokens = preprocess(kRecipe30);
  REQUIRE(tokens.size() == 30);
  const auto v = embed_text(tokens, store);
  CHECK(v.total_tokens == 30);
  CHECK(v.matched_tokens == 27);
  for (std::size_t i = 0; i < 50; ++i) {
    // fixture components are dyadic, so the sums are exact
    CHECK(v.components[i] == kRecipe30Sum[i]);
  }
}

TEST_CASE("cosine of a vector with itself is 1") {
  const auto v = vec({1.0, 2.0, -3.0});
  const auto sim = cosine_similarity(v, v);
  REQUIRE(sim.has_value());
  CHECK(std::fabs(*sim - 1.0) <= 1e-12);
}

TEST_CASE("cosine of antipodal vectors is -1") {
  const auto v = vec({0.5, -1.5, 2.0});
  const auto w = vec({-0.5, 1.5, -2.0});
  const auto sim = cosine_similarity(v, w);
  REQUIRE(sim.has_value());
  CHECK(std::fabs(*sim + 1.0) <= 1e-12);
}

TEST_CASE("cosine with a zero vector is undefined") {
  CHECK_FALSE(cosine_similarity(vec({0.0, 0.0}), vec({1.0, 2.0})).has_value());
  CHECK_FALSE(cosine_similarity(vec({1.0, 2.0}), vec({0.0, 0.0})).has_value());
}

TEST_CASE("cosine rejects dimension mismatches") {
  CHECK_THROWS_AS(cosine_similarity(vec({1.0}), vec({1.0, 2.0})),
                  std::invalid_argument);
}

TEST_CASE("cosine symmetry, scale invariance and bounds") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(0.001, 1000.0);
  for (int trial = 0; trial < 2000; ++trial) {
    TextVector a, b;
    a.components.resize(50);
    b.components.resize(50);
    for (int i = 0; i < 50; ++i) {
      a.components[i] = coord(rng);
      b.components[i] = coord(rng);
    }
    const auto ab = cosine_similarity(a, b);
    const auto ba = cosine_similarity(b, a);
    REQUIRE(ab.has_value());
    CHECK(*ab == *ba);  // exact symmetry
    CHECK(*ab >= -1.0 - 1e-12);
    CHECK(*ab <= 1.0 + 1e-12);

    const double lambda = scale(rng);
    TextVector scaled = a;
    for (auto& c : scaled.components) c *= lambda;
    const auto sim_scaled = cosine_similarity(scaled, b);
    REQUIRE(sim_scaled.has_value());
    CHECK(std::fabs(*sim_scaled - *ab) <= 1e-12);
  }
}

TEST_CASE("embedding is additive over concatenation") {
  const VectorStore store = fixture_store();
  const std::string t1 = "cook the pasta with olive oil";
  const std::string t2 = "bake the chocolate cake in the oven";
  const auto v1 = embed_text(preprocess(t1), store);
  const auto v2 = embed_text(preprocess(t2), store);
  const auto joint = embed_text(preprocess(t1 + " " + t2), store);
  REQUIRE(joint.components.size() == 50);
  for (std::size_t i = 0; i < 50; ++i) {
    // exact: all fixture components are multiples of 2^-10
    CHECK(joint.components[i] == v1.components[i] + v2.components[i]);
  }
  CHECK(joint.total_tokens == v1.total_tokens + v2.total_tokens);
  CHECK(joint.matched_tokens == v1.matched_tokens + v2.matched_tokens);
}
