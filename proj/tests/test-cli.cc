// tests/test-cli.cc

// Copyright 2026  The tiny-transducer Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Runs the tt binary on the toy corpus.

#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "toy-corpus.h"
#include "tt/model-io.h"

namespace fs = std::filesystem;

namespace tt {
namespace {

struct RunResult {
  int status = -1;
  std::string out, err;
};

std::string Slurp(const fs::path &p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path Scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("tt-cli-" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult Run(const std::string &args) {
  const fs::path out = Scratch() / "stdout", err = Scratch() / "stderr";
  const std::string cmd = std::string(TT_CLI) + " " + args + " >" + out.string() + " 2>" +
                          err.string();
  int raw = std::system(cmd.c_str());
  RunResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = Slurp(out);
  r.err = Slurp(err);
  return r;
}

const std::string kToy = TT_TOY_DIR;
const std::string kModel = " --model " + kToy + "/model.ttrd";
const std::string kList = " --list " + kToy + "/feats.scp";

TEST_CASE("decode writes the golden transcripts") {
  RunResult r = Run("decode" + kModel + " --graph " + kToy + "/graph" + kList);
  REQUIRE(r.status == 0);
  CHECK(r.out == Slurp(kToy + "/golden.words.txt"));
  RunResult phones = Run("decode" + kModel + kList);
  REQUIRE(phones.status == 0);
  CHECK(phones.out == Slurp(kToy + "/golden.phones.txt"));
}

TEST_CASE("parallel decoding keeps input order") {
  const std::string base = "decode" + kModel + " --graph " + kToy + "/graph" + kList;
  RunResult one = Run(base + " --jobs 1");
  RunResult four = Run(base + " --jobs 4");
  REQUIRE(one.status == 0);
  REQUIRE(four.status == 0);
  CHECK(one.out == four.out);
}

TEST_CASE("decode accepts positional files and writes traces and scores") {
  const fs::path hyp = Scratch() / "hyp.txt", trace = Scratch() / "trace.txt";
  RunResult r = Run("decode" + kModel + " " + kToy + "/feats/utt01.f32 " + kToy +
                    "/feats/utt02.f32 --out " + hyp.string() + " --trace " + trace.string() +
                    " --ref " + kToy + "/ref.phones.txt");
  REQUIRE(r.status == 0);
  std::string text = Slurp(hyp);
  CHECK(text.rfind("utt01 ", 0) == 0);
  CHECK(text.find("\nutt02 ") != std::string::npos);
  std::string t = Slurp(trace);
  CHECK(t.find("utt=utt01") != std::string::npos);
  CHECK(t.find("frames_skipped=") != std::string::npos);
  CHECK(r.err.find("substitutions=") != std::string::npos);
}

TEST_CASE("phone prior file is applied") {
  const fs::path prior = Scratch() / "prior.txt";
  std::ofstream(prior) << "aa 0.5\nb 0.01\n";
  RunResult r = Run("decode" + kModel + " --graph " + kToy + "/graph" + kList + " --phone-prior " +
                    prior.string());
  CHECK(r.status == 0);
  CHECK(!r.out.empty());
  std::ofstream(prior) << "zz 0.5\n";
  CHECK(Run("decode" + kModel + kList + " --phone-prior " + prior.string()).status == 1);
}

TEST_CASE("a failing utterance is reported and the rest still decode") {
  const fs::path list = Scratch() / "bad.scp";
  {
    std::ofstream os(list);
    os << "good " << kToy << "/feats/utt01.f32\nmissing " << kToy << "/feats/none.f32\n";
  }
  RunResult r = Run("decode" + kModel + " --list " + list.string());
  CHECK(r.status == 0);
  CHECK(r.out.rfind("good ", 0) == 0);
  CHECK(r.out.find("missing") == std::string::npos);
  CHECK(r.err.find("missing") != std::string::npos);
  CHECK(r.err.find("1 utterance(s) failed") != std::string::npos);
}

TEST_CASE("fatal errors exit non-zero") {
  const fs::path junk = Scratch() / "junk.ttrd";
  std::ofstream(junk) << "not a model";
  RunResult bad_model = Run("decode --model " + junk.string() + kList);
  CHECK(bad_model.status == 1);
  CHECK(bad_model.err.find("tt: error:") != std::string::npos);
  CHECK(Run("decode" + kList).status != 0);
  CHECK(Run("decode" + kModel + kList + " --gamma 0").status == 1);
  CHECK(Run("").status != 0);
  CHECK(Run("compress" + kModel + " --out x --rank 2 --energy 0.5").status != 0);
}

TEST_CASE("graph builds the committed graph") {
  const fs::path out = Scratch() / "graph";
  RunResult r = Run("graph" + kModel + " --lexicon " + kToy + "/lexicon.txt --grammar " + kToy +
                    "/grammar.txt --out " + out.string());
  REQUIRE(r.status == 0);
  CHECK(ReadGraphDir(out.string()) == ReadGraphDir(kToy + "/graph"));
  const fs::path lex = Scratch() / "bad-lexicon.txt";
  std::ofstream(lex) << "cat k ae t\n";
  RunResult bad = Run("graph" + kModel + " --lexicon " + lex.string() + " --grammar " + kToy +
                      "/grammar.txt --out " + (Scratch() / "g2").string());
  CHECK(bad.status == 1);
  CHECK(bad.err.find(lex.string() + ": unknown phone 'ae'") != std::string::npos);
  CHECK(bad.err.find("line 1") != std::string::npos);
  const fs::path gram = Scratch() / "bad-grammar.txt";
  std::ofstream(gram) << "no 0\nzebra 1\n";
  RunResult bad_g = Run("graph" + kModel + " --lexicon " + kToy + "/lexicon.txt --grammar " +
                        gram.string() + " --out " + (Scratch() / "g3").string());
  CHECK(bad_g.status == 1);
  CHECK(bad_g.err.find(gram.string() + ": unknown word 'zebra' at line 2") != std::string::npos);
}

TEST_CASE("graph rebuilds are byte-identical") {
  const fs::path a = Scratch() / "ga", b = Scratch() / "gb";
  const std::string base = "graph" + kModel + " --lexicon " + kToy + "/lexicon.txt --grammar " +
                           kToy + "/grammar.txt --out ";
  REQUIRE(Run(base + a.string()).status == 0);
  REQUIRE(Run(base + b.string()).status == 0);
  for (const char *f : {"graph.fst.txt", "phones.txt", "words.txt"})
    CHECK(Slurp(a / f) == Slurp(b / f));
}

TEST_CASE("--fsd and --gamma 2 give identical output") {
  const std::string base = "decode" + kModel + " --graph " + kToy + "/graph" + kList + " --beta 0";
  RunResult fsd = Run(base + " --fsd");
  RunResult gamma = Run(base + " --gamma 2.0");
  REQUIRE(fsd.status == 0);
  REQUIRE(gamma.status == 0);
  CHECK(fsd.out == gamma.out);
}

TEST_CASE("bench prints one row per setting") {
  RunResult r = Run("bench" + kModel + kList + " --betas 0,2 --gammas 2,0.95 --ref " + kToy +
                    "/ref.phones.txt");
  REQUIRE(r.status == 0);
  std::istringstream is(r.out);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(is, line)) lines.push_back(line);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0].rfind("beta", 0) == 0);
  CHECK(lines[0].find("del") != std::string::npos);
  // Columns: beta gamma alpha steps/T rtf s_rtf sub del ins err.
  std::vector<std::vector<std::string>> rows;
  RunResult sweep = Run("bench" + kModel + kList + " --betas 0,1,2 --gammas 2,0.99,0.95 --ref " +
                        kToy + "/ref.phones.txt");
  REQUIRE(sweep.status == 0);
  std::istringstream ss(sweep.out);
  std::getline(ss, line);
  while (std::getline(ss, line)) {
    std::istringstream ls(line);
    rows.emplace_back(std::istream_iterator<std::string>(ls), std::istream_iterator<std::string>());
  }
  REQUIRE(rows.size() == 9);
  for (int b = 0; b < 3; ++b) {
    CHECK(std::stod(rows[3 * b][2]) == 0.0);
    for (int g = 1; g < 3; ++g)
      CHECK(std::stod(rows[3 * b + g][2]) >= std::stod(rows[3 * b + g - 1][2]));
  }
  for (int g = 0; g < 3; ++g)
    for (int b = 1; b < 3; ++b)
      CHECK(std::stoi(rows[3 * b + g][7]) <= std::stoi(rows[3 * (b - 1) + g][7]));
  CHECK(std::stoi(rows[6][7]) < std::stoi(rows[0][7]));
  RunResult kv = Run("bench" + kModel + kList + " --betas 0 --gammas 0.95 --kv");
  REQUIRE(kv.status == 0);
  CHECK(kv.out.find("blank_rate=") != std::string::npos);
  CHECK(kv.out.find("s_rtf=") != std::string::npos);
}

TEST_CASE("compress and quantize produce loadable models") {
  const fs::path svd = Scratch() / "svd.ttrd", q = Scratch() / "q.ttrd";
  RunResult r = Run("compress" + kModel + " --out " + svd.string() + " --rank 4 --quantize");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("dfsmn.0.in_proj") != std::string::npos);
  TransducerModel m = ReadModelFile(svd.string());
  CHECK(m.dfsmn[0].in_proj.rank() == 4);
  CHECK(m.dfsmn[0].in_proj.factors()[0].quantized());
  REQUIRE(Run("quantize" + kModel + " --out " + q.string()).status == 0);
  CHECK(ReadModelFile(q.string()).dfsmn[1].out_proj.factors()[0].quantized());
  RunResult dec = Run("decode --model " + svd.string() + " --graph " + kToy + "/graph" + kList);
  CHECK(dec.status == 0);
  CHECK(dec.err.empty());
  CHECK(Run("compress" + kModel + " --out x --targets nope.*").status == 1);
}

TEST_CASE("info describes models and graphs") {
  RunResult r = Run("info" + kModel + " --graph " + kToy + "/graph");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("num_labels=13") != std::string::npos);
  CHECK(r.out.find("params=") != std::string::npos);
  CHECK(r.out.find("tensor=joint.out") != std::string::npos);
  CHECK(r.out.find("graph_words=") != std::string::npos);
  CHECK(Run("info").status == 2);
}

}  // namespace
}  // namespace tt
