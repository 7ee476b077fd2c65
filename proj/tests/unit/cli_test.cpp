#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "pge/generators.hpp"
#include "pge/embedding.hpp"
#include "pge/graph.hpp"

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pge_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    const auto sbm = pge::stochastic_block_model(120, 3, 0.2, 0.02, 11);
    pge::save_edge_list(sbm.graph, path("g.txt"));
    std::ofstream labels(path("labels.txt"));
    for (pge::VertexId v = 0; v < 120; ++v) labels << v << " block" << sbm.community[v] << '\n';
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(PGE_CLI_PATH) + " " + args + " > " + path("stdout.txt") + " 2> " +
                            path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    return {std::istreambuf_iterator<char>(in), {}};
  }

  bool any_embedding(const fs::path& where) const {
    if (!fs::exists(where)) return false;
    for (const auto& entry : fs::recursive_directory_iterator(where))
      if (entry.path().extension() == ".emb") return true;
    return false;
  }

  fs::path dir_;
};

const char* kFastWalk = " --dim 8 --walks 3 --walk-length 12 --epochs 1";

TEST_F(Cli, StagedCommandsMatchRun) {
  const std::string in = " --input " + path("g.txt") + " --seed 5";
  ASSERT_EQ(run("partition" + in + " --parts 2 --anchors 10 --out " + path("st")), 0) << read("stderr.txt");
  EXPECT_TRUE(fs::exists(path("st/decomposition.txt")));
  ASSERT_EQ(run("embed" + in + kFastWalk + " --manifest " + path("st/decomposition.txt") + " --out " + path("st")),
            0)
      << read("stderr.txt");
  EXPECT_TRUE(fs::exists(path("st/sub_0.emb")));
  EXPECT_TRUE(fs::exists(path("st/sub_1.emb")));
  ASSERT_EQ(run("reconcile" + in + " --out " + path("st")), 0) << read("stderr.txt");
  EXPECT_TRUE(fs::exists(path("st/map_1.emb")));

  ASSERT_EQ(run("run" + in + kFastWalk + " --parts 2 --anchors 10 --eval-pip false --out " + path("full")), 0)
      << read("stderr.txt");
  // the staged path refits on embeddings rounded to 9 digits
  const auto staged = pge::load_embedding(path("st/global.emb"));
  const auto full = pge::load_embedding(path("full/global.emb"));
  ASSERT_EQ(staged.index().size(), full.index().size());
  EXPECT_TRUE(std::equal(staged.index().begin(), staged.index().end(), full.index().begin()));
  EXPECT_LT(pge::max_abs_difference(staged.values(), full.values()), 1e-6);

  ASSERT_EQ(run("eval" + in + " --embedding " + path("st/global.emb") + " --labels " + path("labels.txt") +
                " --eval-pip false --out " + path("ev")),
            0)
      << read("stderr.txt");
  EXPECT_NE(read("stdout.txt").find("micro_f1"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("ev/report.json")));
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
  {
    std::ofstream cfg(path("run.cfg"));
    cfg << "input = " << path("g.txt") << "\nparts = 3\nanchors = 3\ndim = 4\nwalks = 2\nwalk-length = 8\n"
        << "epochs = 1\neval-pip = false\n";
  }
  ASSERT_EQ(run("run --config " + path("run.cfg") + " --parts 2 --out " + path("out")), 0) << read("stderr.txt");
  EXPECT_TRUE(fs::exists(path("out/sub_1.emb")));
  EXPECT_FALSE(fs::exists(path("out/sub_2.emb")));
}

TEST_F(Cli, BoundSubcommand) {
  const std::string base = "bound --input " + path("g.txt") + " --backend svd-hope --dim 4";
  ASSERT_EQ(run(base), 0) << read("stderr.txt");
  EXPECT_NE(read("stdout.txt").find("holds = true"), std::string::npos);
  EXPECT_EQ(run(base + " --part-signal sideways"), 2);
  EXPECT_EQ(run("bound --input " + path("g.txt") + " --backend walk"), 2);
}

TEST_F(Cli, ExitCodes) {
  const std::string in = " --input " + path("g.txt");
  EXPECT_EQ(run("run" + in + " --parts 2 --capacities 60,60 --out " + path("a")), 2);
  EXPECT_FALSE(any_embedding(path("a")));
  EXPECT_EQ(run("run" + in + " --capacities 119,3 --anchors 4 --out " + path("b")), 3);
  EXPECT_NE(read("stderr.txt").find("k_1"), std::string::npos);
  EXPECT_FALSE(any_embedding(path("b")));
  EXPECT_EQ(run("run --input " + path("missing.txt") + " --out " + path("c")), 2);
  EXPECT_EQ(run("run" + in + " --dim zero"), 2);
  EXPECT_EQ(run("run" + in + " --no-such-flag 1"), 2);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("run" + in + " --backend svd-line --parts 2 --anchors 0 --capacities 70,70 --dense-cap 10 --out " +
                path("d")),
            4);
}

}  // namespace
