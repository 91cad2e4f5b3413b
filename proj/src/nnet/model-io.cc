// src/nnet/model-io.cc

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

#include "tt/model-io.h"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <array>
#include <sstream>

namespace tt {

namespace {

constexpr char kMagic[4] = {'T', 'T', 'R', 'D'};

class ByteWriter {
 public:
  void Bytes(const void *p, std::size_t n) {
    const auto *b = static_cast<const std::uint8_t *>(p);
    out_.insert(out_.end(), b, b + n);
  }
  void U8(std::uint8_t v) { out_.push_back(v); }
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void F32(float f) { U32(std::bit_cast<std::uint32_t>(f)); }
  std::vector<std::uint8_t> Take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t> &b) : b_(b) {}
  void Need(std::size_t n, const char *what) const {
    if (b_.size() - pos_ < n)
      throw ModelFormatError(ModelErrorCode::kTruncated,
                             std::string("payload ends inside ") + what);
  }
  std::uint8_t U8(const char *what) {
    Need(1, what);
    return b_[pos_++];
  }
  std::uint32_t U32(const char *what) {
    Need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b_[pos_++]) << (8 * i);
    return v;
  }
  float F32(const char *what) { return std::bit_cast<float>(U32(what)); }
  std::string String(std::size_t n, const char *what) {
    Need(n, what);
    std::string s(reinterpret_cast<const char *>(b_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  std::int8_t I8(const char *what) { return static_cast<std::int8_t>(U8(what)); }
  bool AtEnd() const { return pos_ == b_.size(); }

 private:
  const std::vector<std::uint8_t> &b_;
  std::size_t pos_ = 0;
};

struct NamedWeight {
  std::string name;
  const WeightMatrix *weight;
};

struct Layout {
  std::vector<NamedWeight> tensors;
  // name -> (rows, cols, rank) for factorized layers.
  std::vector<std::pair<std::string, std::array<std::size_t, 3>>> lowrank;
};

// Canonical tensor order. Plain vectors are wrapped as 1 x n matrices.
class Flattener {
 public:
  explicit Flattener(const TransducerModel &m) {
    Add("conv.0.weight", m.subsampler[0].weight);
    AddVec("conv.0.bias", m.subsampler[0].bias);
    Add("conv.1.weight", m.subsampler[1].weight);
    AddVec("conv.1.bias", m.subsampler[1].bias);
    for (std::size_t l = 0; l < m.dfsmn.size(); ++l) {
      std::string base = "dfsmn." + std::to_string(l);
      AddLinear(base + ".in_proj", m.dfsmn[l].in_proj);
      Add(base + ".taps", m.dfsmn[l].taps);
      AddLinear(base + ".out_proj", m.dfsmn[l].out_proj);
      AddVec(base + ".bias", m.dfsmn[l].bias);
    }
    Add("embedding", m.embedding);
    Add("predictor.weight", m.predictor);
    AddVec("predictor.bias", m.predictor_bias);
    AddLinear("joint.enc", m.joint.enc);
    AddLinear("joint.pred", m.joint.pred);
    AddVec("joint.bias", m.joint.bias);
    AddLinear("joint.out", m.joint.out);
    AddVec("joint.out_bias", m.joint.out_bias);
  }

  Layout layout;

 private:
  void Add(const std::string &name, const Matrix &m) {
    owned_.push_back(std::make_unique<WeightMatrix>(m));
    layout.tensors.push_back({name, owned_.back().get()});
  }
  void AddVec(const std::string &name, const std::vector<float> &v) {
    owned_.push_back(std::make_unique<WeightMatrix>(Matrix(1, v.size(), v)));
    layout.tensors.push_back({name, owned_.back().get()});
  }
  void AddLinear(const std::string &name, const Linear &l) {
    if (!l.factored()) {
      layout.tensors.push_back({name, &l.factors()[0]});
      return;
    }
    layout.lowrank.push_back({name, {l.rows(), l.cols(), l.rank()}});
    layout.tensors.push_back({name + ".a", &l.factors()[0]});
    layout.tensors.push_back({name + ".b", &l.factors()[1]});
  }
  std::vector<std::unique_ptr<WeightMatrix>> owned_;
};

std::string ConfigMetadata(const ModelConfig &c) {
  std::ostringstream os;
  os << "format=ttrd\n"
     << "feat_dim=" << c.feat_dim << "\n"
     << "encoder_dim=" << c.encoder_dim << "\n"
     << "num_dfsmn_layers=" << c.num_dfsmn_layers << "\n"
     << "dfsmn_left=" << c.dfsmn_left << "\n"
     << "dfsmn_right=" << c.dfsmn_right << "\n"
     << "dfsmn_proj_dim=" << c.dfsmn_proj_dim << "\n"
     << "joint_dim=" << c.joint_dim << "\n"
     << "embed_dim=" << c.embed_dim << "\n"
     << "pred_dim=" << c.pred_dim << "\n"
     << "predictor_context=" << c.predictor_context << "\n"
     << "num_labels=" << c.num_labels << "\n"
     << "blank_id=" << c.blank_id << "\n"
     << "subsample_factor=" << c.subsample_factor << "\n";
  if (!c.phones.empty()) {
    os << "phones=";
    for (std::size_t i = 0; i < c.phones.size(); ++i)
      os << (i ? " " : "") << c.phones[i];
    os << "\n";
  }
  return os.str();
}

[[noreturn]] void Malformed(const std::string &what) {
  throw ModelFormatError(ModelErrorCode::kMalformedMetadata, what);
}

std::int64_t ParseInt(const std::string &s, const std::string &key) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    Malformed("bad integer for " + key + ": '" + s + "'");
  return v;
}

std::vector<std::string> SplitWs(const std::string &s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

const char *ToString(ModelErrorCode code) {
  switch (code) {
    case ModelErrorCode::kBadMagic: return "bad magic";
    case ModelErrorCode::kVersionMismatch: return "version mismatch";
    case ModelErrorCode::kMalformedMetadata: return "malformed metadata";
    case ModelErrorCode::kShapeMismatch: return "shape mismatch";
    case ModelErrorCode::kTruncated: return "truncated";
    case ModelErrorCode::kTrailingData: return "trailing data";
    case ModelErrorCode::kIoError: return "i/o error";
  }
  return "unknown";
}

std::vector<TensorInfo> TensorManifest(const TransducerModel &model) {
  Flattener flat(model);
  std::vector<TensorInfo> out;
  for (const NamedWeight &t : flat.layout.tensors)
    out.push_back({t.name, t.weight->quantized() ? "int8" : "f32",
                   t.weight->rows(), t.weight->cols()});
  return out;
}

std::vector<std::uint8_t> SaveModel(const TransducerModel &model) {
  model.Validate();
  Flattener flat(model);
  std::string meta = ConfigMetadata(model.config);
  for (const auto &[name, shape] : flat.layout.lowrank)
    meta += "lowrank=" + name + " " + std::to_string(shape[0]) + " " +
            std::to_string(shape[1]) + " " + std::to_string(shape[2]) + "\n";
  for (const NamedWeight &t : flat.layout.tensors)
    meta += "tensor=" + t.name + " " + (t.weight->quantized() ? "int8" : "f32") +
            " " + std::to_string(t.weight->rows()) + " " +
            std::to_string(t.weight->cols()) + "\n";

  ByteWriter w;
  w.Bytes(kMagic, 4);
  w.U8(kTtrdVersion);
  w.U32(static_cast<std::uint32_t>(meta.size()));
  w.Bytes(meta.data(), meta.size());
  for (const NamedWeight &t : flat.layout.tensors) {
    if (t.weight->quantized()) {
      const QuantizedMatrix &q = t.weight->quant();
      for (float s : q.scales) w.F32(s);
      w.Bytes(q.q.data(), q.q.size());
    } else {
      for (float x : t.weight->dense().data()) w.F32(x);
    }
  }
  return w.Take();
}

TransducerModel LoadModel(const std::vector<std::uint8_t> &bytes) {
  ByteReader r(bytes);
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw ModelFormatError(ModelErrorCode::kBadMagic, "expected 'TTRD'");
  r.String(4, "magic");
  std::uint8_t version = r.U8("version");
  if (version != kTtrdVersion)
    throw ModelFormatError(ModelErrorCode::kVersionMismatch,
                           "file version " + std::to_string(version) +
                               ", reader supports " +
                               std::to_string(kTtrdVersion));
  std::uint32_t meta_len = r.U32("metadata length");
  std::string meta = r.String(meta_len, "metadata");

  ModelConfig config;
  std::map<std::string, std::array<std::size_t, 3>> lowrank;
  std::vector<TensorInfo> manifest;
  std::map<std::string, int32 *> int_fields = {
      {"feat_dim", &config.feat_dim},
      {"encoder_dim", &config.encoder_dim},
      {"num_dfsmn_layers", &config.num_dfsmn_layers},
      {"dfsmn_left", &config.dfsmn_left},
      {"dfsmn_right", &config.dfsmn_right},
      {"dfsmn_proj_dim", &config.dfsmn_proj_dim},
      {"joint_dim", &config.joint_dim},
      {"embed_dim", &config.embed_dim},
      {"pred_dim", &config.pred_dim},
      {"predictor_context", &config.predictor_context},
      {"num_labels", &config.num_labels},
      {"blank_id", &config.blank_id},
      {"subsample_factor", &config.subsample_factor}};
  std::map<std::string, bool> seen;

  std::istringstream lines(meta);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) Malformed("line without '=': " + line);
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    if (key == "format") {
      if (value != "ttrd") Malformed("format=" + value);
    } else if (key == "phones") {
      config.phones = SplitWs(value);
    } else if (key == "lowrank") {
      auto f = SplitWs(value);
      if (f.size() != 4) Malformed("lowrank entry: " + value);
      lowrank[f[0]] = {static_cast<std::size_t>(ParseInt(f[1], key)),
                       static_cast<std::size_t>(ParseInt(f[2], key)),
                       static_cast<std::size_t>(ParseInt(f[3], key))};
    } else if (key == "tensor") {
      auto f = SplitWs(value);
      if (f.size() != 4 || (f[1] != "f32" && f[1] != "int8"))
        Malformed("tensor entry: " + value);
      std::int64_t rows = ParseInt(f[2], key), cols = ParseInt(f[3], key);
      if (rows < 0 || cols < 0) Malformed("negative tensor shape");
      manifest.push_back({f[0], f[1], static_cast<std::size_t>(rows),
                          static_cast<std::size_t>(cols)});
    } else if (auto it = int_fields.find(key); it != int_fields.end()) {
      std::int64_t v = ParseInt(value, key);
      *it->second = static_cast<int32>(v);
      seen[key] = true;
    } else {
      Malformed("unknown key '" + key + "'");
    }
  }
  for (const auto &[key, ptr] : int_fields)
    if (!seen.count(key)) Malformed("missing key '" + key + "'");
  try {
    config.Check();
  } catch (const std::invalid_argument &e) {
    throw ModelFormatError(ModelErrorCode::kShapeMismatch, e.what());
  }

  std::map<std::string, WeightMatrix> tensors;
  for (const TensorInfo &t : manifest) {
    if (t.rows * t.cols > bytes.size())
      throw ModelFormatError(ModelErrorCode::kTruncated,
                             "tensor " + t.name + " larger than file");
    if (t.dtype == "f32") {
      std::vector<float> data(t.rows * t.cols);
      for (float &x : data) x = r.F32(t.name.c_str());
      tensors[t.name] = WeightMatrix(Matrix(t.rows, t.cols, std::move(data)));
    } else {
      QuantizedMatrix q;
      q.rows = t.rows;
      q.cols = t.cols;
      q.scales.resize(t.rows);
      for (float &s : q.scales) s = r.F32(t.name.c_str());
      q.q.resize(t.rows * t.cols);
      for (std::int8_t &x : q.q) x = r.I8(t.name.c_str());
      tensors[t.name] = WeightMatrix(std::move(q));
    }
  }
  if (!r.AtEnd())
    throw ModelFormatError(ModelErrorCode::kTrailingData,
                           "bytes after the last tensor");

  auto take = [&](const std::string &name) -> WeightMatrix {
    auto it = tensors.find(name);
    if (it == tensors.end())
      throw ModelFormatError(ModelErrorCode::kShapeMismatch,
                             "missing tensor " + name);
    WeightMatrix w = std::move(it->second);
    tensors.erase(it);
    return w;
  };
  auto take_dense = [&](const std::string &name) -> Matrix {
    WeightMatrix w = take(name);
    if (w.quantized())
      throw ModelFormatError(ModelErrorCode::kMalformedMetadata,
                             name + " cannot be int8");
    return w.dense();
  };
  auto take_vec = [&](const std::string &name) -> std::vector<float> {
    Matrix m = take_dense(name);
    if (m.rows() != 1)
      throw ModelFormatError(ModelErrorCode::kShapeMismatch,
                             name + " must be a single row");
    return {m.data().begin(), m.data().end()};
  };
  auto take_linear = [&](const std::string &name) -> Linear {
    auto it = lowrank.find(name);
    if (it == lowrank.end()) return Linear(take(name));
    auto [rows, cols, rank] = it->second;
    lowrank.erase(it);
    WeightMatrix a = take(name + ".a"), b = take(name + ".b");
    if (a.rows() != rows || b.cols() != cols || a.cols() != rank ||
        b.rows() != rank)
      throw ModelFormatError(ModelErrorCode::kShapeMismatch,
                             "factor shapes of " + name +
                                 " disagree with lowrank entry");
    return Linear(std::move(a), std::move(b));
  };

  TransducerModel m;
  m.config = config;
  m.subsampler[0].weight = take_dense("conv.0.weight");
  m.subsampler[0].bias = take_vec("conv.0.bias");
  m.subsampler[1].weight = take_dense("conv.1.weight");
  m.subsampler[1].bias = take_vec("conv.1.bias");
  m.dfsmn.resize(config.num_dfsmn_layers);
  for (std::size_t l = 0; l < m.dfsmn.size(); ++l) {
    std::string base = "dfsmn." + std::to_string(l);
    m.dfsmn[l].in_proj = take_linear(base + ".in_proj");
    m.dfsmn[l].taps = take_dense(base + ".taps");
    m.dfsmn[l].out_proj = take_linear(base + ".out_proj");
    m.dfsmn[l].bias = take_vec(base + ".bias");
  }
  m.embedding = take_dense("embedding");
  m.predictor = take_dense("predictor.weight");
  m.predictor_bias = take_vec("predictor.bias");
  m.joint.enc = take_linear("joint.enc");
  m.joint.pred = take_linear("joint.pred");
  m.joint.bias = take_vec("joint.bias");
  m.joint.out = take_linear("joint.out");
  m.joint.out_bias = take_vec("joint.out_bias");
  if (!tensors.empty())
    Malformed("unexpected tensor " + tensors.begin()->first);
  if (!lowrank.empty())
    Malformed("lowrank entry for unknown layer " + lowrank.begin()->first);

  try {
    m.Validate();
  } catch (const ShapeError &e) {
    throw ModelFormatError(ModelErrorCode::kShapeMismatch, e.what());
  } catch (const DomainError &e) {
    throw ModelFormatError(ModelErrorCode::kMalformedMetadata, e.what());
  }
  return m;
}

void WriteModelFile(const TransducerModel &model, const std::string &path) {
  std::vector<std::uint8_t> bytes = SaveModel(model);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ModelFormatError(ModelErrorCode::kIoError, "cannot open " + path);
  os.write(reinterpret_cast<const char *>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw ModelFormatError(ModelErrorCode::kIoError, "write failed: " + path);
}

TransducerModel ReadModelFile(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ModelFormatError(ModelErrorCode::kIoError, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                  std::istreambuf_iterator<char>());
  return LoadModel(bytes);
}

}  // namespace tt
