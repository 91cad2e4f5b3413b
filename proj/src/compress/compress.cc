// src/compress/compress.cc

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

#include "tt/compress.h"

#include <fnmatch.h>

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "tt/svd.h"

namespace tt {

void CompressionSpec::Check() const {
  if (targets.empty()) throw std::invalid_argument("compression needs at least one target");
  if (rank && *rank < 1) throw std::invalid_argument("rank must be >= 1");
  if (!rank && !(energy > 0.0 && energy <= 1.0))
    throw std::invalid_argument("energy must lie in (0, 1]");
}

bool GlobMatch(const std::string &pattern, const std::string &name) {
  return fnmatch(pattern.c_str(), name.c_str(), 0) == 0;
}

TransducerModel SvdCompress(const TransducerModel &model, const CompressionSpec &spec,
                            CompressionReport *report) {
  spec.Check();
  for (const std::string &p : spec.targets) {
    bool any = false;
    ForEachLinear(model, [&](const std::string &name, const Linear &) {
      any = any || GlobMatch(p, name);
    });
    if (!any) throw std::invalid_argument("unknown compression target '" + p + "'");
  }

  TransducerModel out = model;
  CompressionReport rep;
  rep.params_before = model.NumParameters();
  ForEachLinear(out, [&](const std::string &name, Linear &layer) {
    if (std::none_of(spec.targets.begin(), spec.targets.end(),
                     [&](const std::string &p) { return GlobMatch(p, name); }))
      return;
    LayerCompression lc;
    lc.name = name;
    lc.params_before = layer.NumParameters();
    Matrix w = layer.ToDense();
    lc.rows = w.rows();
    lc.cols = w.cols();
    SvdFactors f = Svd(w);
    std::size_t k = spec.rank ? static_cast<std::size_t>(*spec.rank)
                              : RankForEnergy(f.s, spec.energy);
    if (k > f.rank()) {
      lc.clamped = true;
      std::string msg = name + ": rank " + std::to_string(k) + " clamped to " +
                        std::to_string(f.rank());
      TT_WARN << msg;
      rep.warnings.push_back(msg);
      k = f.rank();
    }
    lc.rank = k;
    for (std::size_t i = k; i < f.s.size(); ++i) lc.tail_energy += f.s[i] * f.s[i];
    SvdFactors t = Truncate(f, k);
    Matrix a(w.rows(), k), b(k, w.cols());
    for (std::size_t r = 0; r < w.rows(); ++r)
      for (std::size_t c = 0; c < k; ++c)
        a(r, c) = static_cast<float>(t.u(r, c) * t.s[c]);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < w.cols(); ++c) b(r, c) = t.vt(r, c);
    layer = Linear(WeightMatrix(std::move(a)), WeightMatrix(std::move(b)));
    Matrix approx = layer.ToDense();
    for (std::size_t i = 0; i < w.size(); ++i) {
      double d = static_cast<double>(w.data()[i]) - approx.data()[i];
      lc.error_sq += d * d;
    }
    lc.params_after = layer.NumParameters();
    rep.layers.push_back(lc);
  });
  out.Validate();
  rep.params_after = out.NumParameters();
  if (report) *report = std::move(rep);
  return out;
}

TransducerModel QuantizeInt8(const TransducerModel &model) {
  TransducerModel out = model;
  for (DfsmnLayer &layer : out.dfsmn)
    for (Linear *l : {&layer.in_proj, &layer.out_proj})
      for (WeightMatrix &w : l->factors())
        if (!w.quantized()) w = WeightMatrix(QuantizedMatrix::Quantize(w.dense()));
  return out;
}

std::string FormatReport(const CompressionReport &report) {
  std::ostringstream os;
  for (const LayerCompression &l : report.layers)
    os << "layer=" << l.name << " shape=" << l.rows << 'x' << l.cols << " rank=" << l.rank
       << " params=" << l.params_before << "->" << l.params_after
       << " error_sq=" << l.error_sq << " tail_energy=" << l.tail_energy
       << (l.clamped ? " clamped=1" : "") << '\n';
  os << "params_before=" << report.params_before << '\n'
     << "params_after=" << report.params_after << '\n'
     << "warnings=" << report.warnings.size() << '\n';
  return os.str();
}

}  // namespace tt
