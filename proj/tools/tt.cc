// tools/tt.cc

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

// Command-line front end: graph building, decoding, compression and
// benchmarking.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "tt/compress.h"
#include "tt/decoder.h"
#include "tt/graph.h"
#include "tt/metrics.h"
#include "tt/model-io.h"

namespace fs = std::filesystem;

namespace tt {
namespace {

template <typename... Args>
[[noreturn]] void Die(const Args &...args) {
  std::ostringstream os;
  (os << ... << args);
  throw std::runtime_error(os.str());
}

struct Utterance {
  std::string id;
  std::string path;
};

struct Outcome {
  DecodeResult result;
  std::string error;  // empty on success
};

// Positional feature files (id = file stem) followed by "id path" lines of
// `list`, whose relative paths are resolved against the list's directory.
std::vector<Utterance> CollectUtterances(const std::vector<std::string> &files,
                                         const std::string &list) {
  std::vector<Utterance> utts;
  for (const std::string &f : files) utts.push_back({fs::path(f).stem().string(), f});
  if (!list.empty()) {
    std::ifstream is(list);
    if (!is) Die("cannot open utterance list ", list);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      std::istringstream ls(line);
      Utterance u;
      if (!(ls >> u.id)) continue;
      if (!(ls >> u.path)) Die(list, ":", lineno, ": expected 'id path'");
      if (fs::path(u.path).is_relative())
        u.path = (fs::path(list).parent_path() / u.path).string();
      utts.push_back(u);
    }
  }
  if (utts.empty()) Die("no feature input given");
  return utts;
}

std::map<std::string, std::vector<std::string>> ReadTranscripts(const std::string &path) {
  std::ifstream is(path);
  if (!is) Die("cannot open transcript file ", path);
  std::map<std::string, std::vector<std::string>> out;
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string id, tok;
    if (!(ls >> id)) continue;
    auto &v = out[id];
    while (ls >> tok) v.push_back(tok);
  }
  return out;
}

// Decodes every utterance with up to `jobs` threads; results keep input
// order.
std::vector<Outcome> DecodeAll(const TransducerModel &model, const Fst *graph,
                               const PhonePrior *prior, const DecodeParams &params,
                               const std::vector<Utterance> &utts, int jobs,
                               std::vector<int64> *raw_frames = nullptr) {
  std::vector<Outcome> out(utts.size());
  std::vector<int64> frames(utts.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < utts.size(); i = next++) {
      try {
        Frames x = ReadFeatureFile(utts[i].path, model.config.feat_dim);
        frames[i] = static_cast<int64>(x.size());
        out[i].result = DecodeUtterance(model, x, params, graph, prior);
      } catch (const std::exception &e) {
        out[i].error = e.what();
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(utts.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread &t : pool) t.join();
  if (raw_frames) *raw_frames = std::move(frames);
  return out;
}

std::string JoinTokens(const std::string &id, const std::vector<std::string> &tokens) {
  std::string line = id;
  for (const std::string &t : tokens) line += " " + t;
  return line;
}

std::ofstream OpenOutput(const std::string &path) {
  std::ofstream os(path);
  if (!os) Die("cannot write ", path);
  return os;
}

struct DecodeOptions {
  std::string model, graph, list, out, trace, prior, ref;
  std::vector<std::string> features;
  DecodeParams params;
  bool fsd = false;
  int jobs = 1;
};

void AddDecodeFlags(CLI::App *cmd, DecodeOptions *o, bool sweep) {
  cmd->add_option("--model", o->model, "Model file (TTRD)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--graph", o->graph, "Decoding graph directory; omit for phone output")
      ->check(CLI::ExistingDirectory);
  cmd->add_option("features", o->features, "Feature files (.txt text, otherwise binary f32)");
  cmd->add_option("--list", o->list, "File of 'utt_id path' lines")->check(CLI::ExistingFile);
  cmd->add_option("--phone-prior", o->prior, "File of 'phone probability' lines")
      ->check(CLI::ExistingFile);
  cmd->add_option("--beam", o->params.beam, "Search beam")->capture_default_str();
  cmd->add_option("--max-active", o->params.max_active, "Maximum active tokens (0 = no limit)")
      ->capture_default_str();
  cmd->add_option("--jobs,-j", o->jobs, "Parallel utterances")->capture_default_str();
  cmd->add_option("--ref", o->ref, "Reference transcripts 'utt_id token ...'")
      ->check(CLI::ExistingFile);
  if (!sweep) {
    cmd->add_option("--beta", o->params.beta_blank, "Blank deweight (log domain)")
        ->capture_default_str();
    cmd->add_option("--gamma", o->params.gamma_blank, "Blank skip threshold; > 1 disables skipping")
        ->capture_default_str();
    cmd->add_flag("--fsd", o->fsd, "Frame-synchronous decoding (same as --gamma 2)");
    cmd->add_option("--out,-o", o->out, "Hypothesis output file (default stdout)");
    cmd->add_option("--trace", o->trace, "Per-utterance trace report (key=value)");
  }
}

struct Loaded {
  TransducerModel model;
  std::optional<Fst> graph;
  std::optional<PhonePrior> prior;
  std::vector<Utterance> utts;
};

Loaded Load(const DecodeOptions &o) {
  Loaded l;
  l.utts = CollectUtterances(o.features, o.list);
  l.model = ReadModelFile(o.model);
  if (!o.graph.empty()) l.graph = ReadGraphDir(o.graph);
  if (!o.prior.empty()) {
    std::ifstream is(o.prior);
    l.prior = PhonePrior::Read(is, PhoneSymbols(l.model.config), l.model.config.num_labels);
  }
  return l;
}

int RunDecode(DecodeOptions o) {
  if (o.fsd) o.params.gamma_blank = DecodeParams::kFsdGamma;
  o.params.Check();
  Loaded l = Load(o);
  std::vector<Outcome> res =
      DecodeAll(l.model, l.graph ? &*l.graph : nullptr, l.prior ? &*l.prior : nullptr,
                o.params, l.utts, o.jobs);
  std::ofstream file;
  if (!o.out.empty()) file = OpenOutput(o.out);
  std::ostream &os = o.out.empty() ? std::cout : file;
  std::ofstream trace;
  if (!o.trace.empty()) trace = OpenOutput(o.trace);
  int failed = 0;
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (!res[i].error.empty()) {
      ++failed;
      std::cerr << "tt decode: " << l.utts[i].id << ": " << res[i].error << '\n';
      continue;
    }
    os << JoinTokens(l.utts[i].id, res[i].result.tokens) << '\n';
    if (trace) trace << "utt=" << l.utts[i].id << '\n' << FormatTrace(res[i].result.trace);
  }
  if (!o.ref.empty()) {
    auto refs = ReadTranscripts(o.ref);
    ErrorBreakdown total;
    for (std::size_t i = 0; i < res.size(); ++i)
      if (res[i].error.empty() && refs.count(l.utts[i].id))
        total += AlignAndCount(refs.at(l.utts[i].id), res[i].result.tokens);
    std::cerr << FormatKeyValue(total);
  }
  if (failed) std::cerr << "tt decode: " << failed << " utterance(s) failed\n";
  return 0;
}

std::vector<double> ParseList(const std::string &s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception &) {
      Die("bad number '", item, "' in list '", s, "'");
    }
  }
  if (v.empty()) Die("empty value list");
  return v;
}

std::string Fixed(double x, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << x;
  return os.str();
}

int RunBench(DecodeOptions o, const std::string &betas, const std::string &gammas,
             double frame_shift_ms, bool kv) {
  Loaded l = Load(o);
  std::map<std::string, std::vector<std::string>> refs;
  if (!o.ref.empty()) refs = ReadTranscripts(o.ref);
  std::vector<std::string> header{"beta", "gamma", "alpha", "steps/T", "rtf", "s_rtf"};
  if (!refs.empty())
    for (const char *h : {"sub", "del", "ins", "err"}) header.push_back(h);
  std::vector<std::vector<std::string>> rows;
  for (double beta : ParseList(betas)) {
    for (double gamma : ParseList(gammas)) {
      DecodeParams p = o.params;
      p.beta_blank = beta;
      p.gamma_blank = gamma;
      p.Check();
      std::vector<int64> frames;
      std::vector<Outcome> res =
          DecodeAll(l.model, l.graph ? &*l.graph : nullptr, l.prior ? &*l.prior : nullptr, p,
                    l.utts, o.jobs, &frames);
      std::vector<DecodeTrace> traces;
      int64 raw = 0;
      ErrorBreakdown errs;
      for (std::size_t i = 0; i < res.size(); ++i) {
        if (!res[i].error.empty()) {
          std::cerr << "tt bench: " << l.utts[i].id << ": " << res[i].error << '\n';
          continue;
        }
        traces.push_back(res[i].result.trace);
        raw += frames[i];
        if (refs.count(l.utts[i].id))
          errs += AlignAndCount(refs.at(l.utts[i].id), res[i].result.tokens);
      }
      double seconds = std::max(raw * frame_shift_ms / 1000.0, 1e-9);
      SpeedReport r = MakeSpeedReport(traces, seconds);
      std::vector<std::string> row{Fixed(beta, 2), Fixed(gamma, 3), Fixed(r.blank_rate, 4),
                                   Fixed(r.step_ratio, 4), Fixed(r.rtf, 4), Fixed(r.s_rtf, 4)};
      if (!refs.empty())
        for (int64 v : {errs.substitutions, errs.deletions, errs.insertions})
          row.push_back(std::to_string(v));
      if (!refs.empty()) row.push_back(Fixed(errs.wer(), 4));
      rows.push_back(row);
      if (kv) {
        std::cout << "beta=" << beta << " gamma=" << gamma << '\n' << FormatKeyValue(r);
        if (!refs.empty()) std::cout << FormatKeyValue(errs);
      }
    }
  }
  if (!kv) std::cout << FormatTable(header, rows);
  return 0;
}

int RunGraph(const std::string &model_path, const std::string &lexicon,
             const std::string &grammar, const std::string &out) {
  TransducerModel model = ReadModelFile(model_path);
  std::ifstream lex(lexicon), gram(grammar);
  if (!lex) Die("cannot open lexicon ", lexicon);
  if (!gram) Die("cannot open grammar ", grammar);
  // The lexicon is checked on its own first so that errors name the file
  // they come from.
  std::vector<LexiconEntry> entries;
  try {
    entries = ReadLexicon(lex);
    BuildLexicon(entries, PhoneSymbols(model.config), model.config.LabelName(model.config.blank_id));
  } catch (const GraphInputError &e) {
    Die(lexicon, ": ", e.what());
  }
  Fst lg;
  try {
    lg = BuildDecodingGraph(entries, gram, model.config);
  } catch (const GraphInputError &e) {
    Die(grammar, ": ", e.what());
  }
  WriteGraphDir(lg, out);
  std::cerr << "states=" << lg.NumStates() << "\narcs=" << lg.NumArcs() << '\n';
  return 0;
}

int RunCompress(const std::string &in, const std::string &out, std::optional<int64> rank,
                double energy, const std::vector<std::string> &targets, bool quantize) {
  TransducerModel model = ReadModelFile(in);
  CompressionSpec spec;
  spec.rank = rank;
  spec.energy = energy;
  if (!targets.empty()) spec.targets = targets;
  spec.quantize = quantize;
  CompressionReport rep;
  TransducerModel c = SvdCompress(model, spec, &rep);
  if (quantize) c = QuantizeInt8(c);
  WriteModelFile(c, out);
  std::cout << FormatReport(rep);
  return 0;
}

int RunQuantize(const std::string &in, const std::string &out) {
  TransducerModel model = ReadModelFile(in);
  TransducerModel q = QuantizeInt8(model);
  WriteModelFile(q, out);
  std::cout << "params=" << q.NumParameters() << '\n';
  return 0;
}

int RunInfo(const std::string &model_path, const std::string &graph_dir) {
  if (!model_path.empty()) {
    TransducerModel m = ReadModelFile(model_path);
    const ModelConfig &c = m.config;
    std::cout << "feat_dim=" << c.feat_dim << "\nencoder_dim=" << c.encoder_dim
              << "\nnum_dfsmn_layers=" << c.num_dfsmn_layers << "\ndfsmn_left=" << c.dfsmn_left
              << "\ndfsmn_right=" << c.dfsmn_right << "\ndfsmn_proj_dim=" << c.dfsmn_proj_dim
              << "\njoint_dim=" << c.joint_dim << "\nembed_dim=" << c.embed_dim
              << "\npred_dim=" << c.pred_dim << "\npredictor_context=" << c.predictor_context
              << "\nnum_labels=" << c.num_labels << "\nblank_id=" << c.blank_id
              << "\nlookahead_frames=" << c.total_lookahead() * c.subsample_factor
              << "\nparams=" << m.NumParameters() << '\n';
    for (const TensorInfo &t : TensorManifest(m))
      std::cout << "tensor=" << t.name << ' ' << t.dtype << ' ' << t.rows << 'x' << t.cols
                << '\n';
  }
  if (!graph_dir.empty()) {
    Fst g = ReadGraphDir(graph_dir);
    std::cout << "graph_states=" << g.NumStates() << "\ngraph_arcs=" << g.NumArcs()
              << "\ngraph_phones=" << g.isyms().size() << "\ngraph_words=" << g.osyms().size()
              << '\n';
  }
  return 0;
}

}  // namespace
}  // namespace tt

int main(int argc, char **argv) {
  using namespace tt;
  CLI::App app{"Streaming phone transducer decoder and model tools"};
  app.require_subcommand(1);

  std::string model, lexicon, grammar, out, graph_dir;
  auto *graph = app.add_subcommand("graph", "Build a decoding graph from lexicon and grammar");
  graph->add_option("--model", model, "Model whose phone set the graph uses")
      ->required()->check(CLI::ExistingFile);
  graph->add_option("--lexicon", lexicon, "Lines 'word phone ...'")->required()
      ->check(CLI::ExistingFile);
  graph->add_option("--grammar", grammar, "ARPA, word list or word pair grammar")->required()
      ->check(CLI::ExistingFile);
  graph->add_option("--out,-o", out, "Output directory")->required();

  DecodeOptions dec;
  auto *decode = app.add_subcommand("decode", "Decode feature files");
  AddDecodeFlags(decode, &dec, false);

  DecodeOptions bench_opts;
  std::string betas = "0,2", gammas = "2,0.99,0.95";
  double frame_shift_ms = 10.0;
  bool kv = false;
  auto *bench = app.add_subcommand("bench", "Sweep beta and gamma over a feature set");
  AddDecodeFlags(bench, &bench_opts, true);
  bench->add_option("--betas", betas, "Comma-separated blank deweights")->capture_default_str();
  bench->add_option("--gammas", gammas, "Comma-separated skip thresholds")->capture_default_str();
  bench->add_option("--frame-shift-ms", frame_shift_ms, "Input frame shift for RTF")
      ->capture_default_str();
  bench->add_flag("--kv", kv, "Print key=value records instead of a table");

  std::string in;
  std::optional<int64> rank;
  double energy = CompressionSpec::kDefaultEnergy;
  std::vector<std::string> targets;
  bool quantize = false;
  auto *compress = app.add_subcommand("compress", "Low-rank factorize projection layers");
  compress->add_option("--model", in, "Input model")->required()->check(CLI::ExistingFile);
  compress->add_option("--out,-o", out, "Output model")->required();
  auto *rank_opt = compress->add_option("--rank", rank, "Explicit rank for every target");
  compress->add_option("--energy", energy, "Kept squared singular value fraction")
      ->capture_default_str()->excludes(rank_opt);
  compress->add_option("--targets", targets, "Layer name globs")->delimiter(',');
  compress->add_flag("--quantize", quantize, "Also store DFSMN projections as int8");

  auto *quant = app.add_subcommand("quantize", "Store DFSMN projections as int8");
  quant->add_option("--model", in, "Input model")->required()->check(CLI::ExistingFile);
  quant->add_option("--out,-o", out, "Output model")->required();

  auto *info = app.add_subcommand("info", "Describe a model and/or graph");
  info->add_option("--model", model, "Model file")->check(CLI::ExistingFile);
  info->add_option("--graph", graph_dir, "Graph directory")->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*graph) return RunGraph(model, lexicon, grammar, out);
    if (*decode) return RunDecode(dec);
    if (*bench) return RunBench(bench_opts, betas, gammas, frame_shift_ms, kv);
    if (*compress) return RunCompress(in, out, rank, energy, targets, quantize);
    if (*quant) return RunQuantize(in, out);
    if (*info) {
      if (model.empty() && graph_dir.empty()) {
        std::cerr << "tt info: give --model and/or --graph\n";
        return 2;
      }
      return RunInfo(model, graph_dir);
    }
  } catch (const std::exception &e) {
    std::cerr << "tt: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
