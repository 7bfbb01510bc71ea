#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "prefnet/csvio.hpp"
#include "prefnet/network.hpp"
#include "test_util.hpp"

using namespace prefnet;
using testutil::TempDir;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PREFNET_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("gen-net writes a valid, seed-deterministic network") {
  TempDir dir;
  const auto a = dir.file("a.csv");
  const auto b = dir.file("b.csv");
  CHECK(run_cli("gen-net --model ws --n 60 --ws-k 4 --preset facebook-all --seed 7 --out " +
                a.string()) == 0);
  const Network net = load_network(a);
  CHECK(net.node_count() == 60);

  CHECK(run_cli("gen-net --model ws --n 60 --ws-k 4 --preset facebook-all --seed 7 --out " +
                b.string()) == 0);
  CHECK(slurp(a) == slurp(b));

  // missing seed is a usage error; tiny n is a parameter error
  CHECK(run_cli("gen-net --model ws --n 60 --out " + dir.file("c.csv").string()) != 0);
  CHECK(run_cli("gen-net --model ws --n 1 --seed 7 --out " + dir.file("d.csv").string()) != 0);
}

TEST_CASE("simulate produces loadable, deterministic profiles") {
  TempDir dir;
  const auto net = dir.file("net.csv");
  REQUIRE(run_cli("gen-net --model er --er-p 0.1 --n 40 --seed 3 --out " + net.string()) == 0);

  const auto p1 = dir.file("p1.csv");
  const auto p2 = dir.file("p2.csv");
  CHECK(run_cli("simulate --net " + net.string() +
                " --model rpm-s --topics 20 --r 4 --seed 5 --out " + p1.string()) == 0);
  const TopicProfiles topics = load_profiles(p1);
  CHECK(topics.topics == 20);
  CHECK(topics.r == 4);

  CHECK(run_cli("simulate --net " + net.string() +
                " --model rpm-s --topics 20 --r 4 --seed 5 --threads 2 --out " +
                p2.string()) == 0);
  CHECK(slurp(p1) == slurp(p2));

  // capacity guard: rpm-ic cannot enumerate 8! candidates
  CHECK(run_cli("simulate --net " + net.string() +
                " --model rpm-ic --topics 2 --r 8 --seed 5 --out " +
                dir.file("x.csv").string()) != 0);
}

TEST_CASE("select, evaluate, fit, score, verify round trip") {
  TempDir dir;
  const auto net = dir.file("net.csv");
  const auto profiles = dir.file("profiles.csv");
  REQUIRE(run_cli("gen-net --model ba --ba-m 2 --n 30 --seed 11 --out " + net.string()) == 0);
  REQUIRE(run_cli("simulate --net " + net.string() +
                  " --model rpm-s --topics 40 --r 4 --seed 13 --out " +
                  profiles.string()) == 0);

  const auto sel = dir.file("sel.csv");
  CHECK(run_cli("select --net " + net.string() + " --algo greedy-sum --k 5" +
                " --matrix empirical --topics-file " + profiles.string() +
                " --seed 17 --out " + sel.string()) == 0);
  CHECK(slurp(sel).rfind("rank,node,weight\n", 0) == 0);

  const auto results = dir.file("results.csv");
  CHECK(run_cli("evaluate --net " + net.string() +
                " --model rpm-s --topics 30 --r 4 --matrix empirical" +
                " --rules plurality,borda --algos greedy-sum,random-poll" +
                " --ks 2,5 --poll-runs 5 --seed 19 --out " + results.string()) == 0);
  CHECK(slurp(results).rfind("algorithm,rule,k,mean_error,stderr,worst_error,runtime_ms\n",
                             0) == 0);

  const auto fitted = dir.file("fitted.csv");
  CHECK(run_cli("fit --adjacency " + net.string() + " --profiles " + profiles.string() +
                " --r 4 --out " + fitted.string()) == 0);
  CHECK_NOTHROW(load_network(fitted));

  CHECK(run_cli("score --profiles " + profiles.string() + " --node 3") == 0);
  CHECK(run_cli("score --profiles " + profiles.string() + " --node 3 --friend 7") == 0);

  CHECK(run_cli("verify --suite tu --n 5 --instances 3 --seed 23") == 0);
  CHECK(run_cli("verify --suite unknown --seed 23") != 0);
}

}  // TEST_SUITE
