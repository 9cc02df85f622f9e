#include <doctest.h>

#include <cstdlib>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rdv/analysis.hpp"
#include "rdv/corpus.hpp"
#include "rdv/error.hpp"

using namespace rdv;

TEST_CASE("random tree generator") {
  const Tree two = gen_random_tree(2, 2, 0, 1);
  CHECK(two.size() == 2);
  CHECK(two.degree(0) == 1);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Tree p = gen_random_tree(10, 2, 0, s);
    CHECK(p.max_degree() == 2);
    CHECK(p.leaf_count() == 2);
  }
  std::mt19937_64 rng(51);
  for (int k = 0; k < 1000; ++k) {
    const NodeId n = std::uniform_int_distribution<NodeId>(3, 60)(rng);
    const int l = std::uniform_int_distribution<int>(2, n - 1)(rng);
    const Tree t = gen_random_tree(n, l, 0, rng());
    std::istringstream in(tree_to_string(t));
    CHECK(validate(parse_tree(in)).ok());
    CHECK(t.size() == n);
    CHECK(t.leaf_count() == l);
  }
  for (int k = 0; k < 200; ++k) {
    const Tree t = gen_random_tree(40, 8, 3, k);
    CHECK(t.max_degree() <= 3);
    CHECK(t.leaf_count() == 8);
  }
  CHECK_THROWS_AS(gen_random_tree(5, 5, 0, 1), InvalidInput);
  CHECK_THROWS_AS(gen_random_tree(20, 12, 3, 1), InvalidInput);
  CHECK(tree_to_string(gen_random_tree(30, 6, 0, 9)) == tree_to_string(gen_random_tree(30, 6, 0, 9)));
}

TEST_CASE("symmetric-contraction generator") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Tree t = gen_symmetric_contraction_tree(6, 3, 1 + s % 3, 3, s);
    const ContractionView v = contract(t);
    CHECK(is_symmetric(v.contracted) == true);
    CHECK(t.leaf_count() == 6);
  }
}

TEST_CASE("free tree enumeration") {
  const int counts[] = {1, 1, 1, 2, 3, 6, 11, 23, 47};
  for (NodeId n = 1; n <= 9; ++n) {
    const auto trees = enumerate_free_trees(n);
    CHECK(trees.size() == static_cast<std::size_t>(counts[n - 1]));
    if (n > 7) continue;  // the backtracking oracle is slow beyond this
    for (std::size_t i = 0; i < trees.size(); ++i) {
      for (std::size_t j = i + 1; j < trees.size(); ++j) CHECK_FALSE(oracle::free_isomorphic(trees[i], trees[j]));
    }
  }
}

TEST_CASE("digest") {
  CHECK(digest("") == "cbf29ce484222325");
  CHECK(digest("a") == "af63dc4c8601ec8c");
  CHECK(digest("a").size() == 16);
}

TEST_CASE("empty corpus") {
  CorpusSpec spec;
  const CorpusReport rep = corpus_run(spec, 1);
  CHECK(rep.cases == 0);
  CHECK(rep.ok());
  std::ostringstream out;
  write_report(out, rep);
  CHECK(out.str().rfind("summary cases=0", 0) == 0);
}

TEST_CASE("small exhaustive corpus agrees with brute force") {
  CorpusSpec spec;
  spec.exhaustive_max_n = 5;
  const CorpusReport rep = corpus_run(spec, 2);
  CHECK(rep.cases > 0);
  CHECK(rep.agreements == rep.cases);
  CHECK(rep.parity_failed == 0);
}

TEST_CASE("corpus output is deterministic and worker-independent") {
  CorpusSpec spec;
  spec.seed = 7;
  spec.tree_count = 12;
  spec.n_min = 4;
  spec.n_max = 30;
  spec.leaves_max = 6;
  spec.pairs = PairPolicy::Sampled;
  spec.sampled_pairs = 3;
  std::ostringstream a, b;
  write_report(a, corpus_run(spec, 1), true);
  write_report(b, corpus_run(spec, 3), true);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("status=ok") != std::string::npos);
}

TEST_CASE("claims on symmetric-contraction corpus") {
  CorpusSpec spec;
  spec.seed = 3;
  spec.tree_count = 4;
  spec.n_min = 3;
  spec.n_max = 7;
  spec.leaves_min = 2;
  spec.leaves_max = 3;
  spec.symmetric_contraction = true;
  spec.claims = true;
  spec.pairs = PairPolicy::Sampled;
  spec.sampled_pairs = 2;
  const CorpusReport rep = corpus_run(spec, 2);
  CHECK(rep.ok());
  CHECK(rep.claims_checked > 0);
}
