// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mmtss/embedding.hpp"

#include "mmtss/errors.hpp"
#include "mmtss/prng.hpp"

namespace mmtss {

int canonical_embedding_dim(EmbeddingKind kind) {
  switch (kind) {
    case EmbeddingKind::kAcoustic: return 256;
    case EmbeddingKind::kLip: return 256;
    case EmbeddingKind::kSpeaker: return 128;
  }
  throw ValidationError("unknown embedding kind");
}

void EmbeddingSequence::validate(bool check_dim) const {
  if (values.rows() < 1 || values.cols() < 1) {
    throw ValidationError("embedding: empty sequence");
  }
  if (!values.allFinite()) throw ValidationError("embedding: non-finite values");
  if (check_dim && dim() != canonical_embedding_dim(kind)) {
    throw ValidationError("embedding: dimension does not match its kind");
  }
}

Eigen::Index nearest_source_row(Eigen::Index t, Eigen::Index source_rows,
                                Eigen::Index target_rows) {
  // ceil((2t+1)*K / (2T)) - 1 in exact integer arithmetic.
  const Eigen::Index num = (2 * t + 1) * source_rows;
  const Eigen::Index den = 2 * target_rows;
  const Eigen::Index k = (num + den - 1) / den - 1;
  return std::clamp<Eigen::Index>(k, 0, source_rows - 1);
}

EmbeddingSequence upsample_nearest(const EmbeddingSequence& emb, Eigen::Index frames) {
  emb.validate();
  if (frames < 1) throw ValidationError("upsample: target frame count must be >= 1");
  EmbeddingSequence out;
  out.kind = emb.kind;
  out.frame_rate = emb.frame_rate * static_cast<double>(frames) /
                   static_cast<double>(emb.frames());
  out.values.resize(frames, emb.dim());
  for (Eigen::Index t = 0; t < frames; ++t) {
    out.values.row(t) = emb.values.row(nearest_source_row(t, emb.frames(), frames));
  }
  return out;
}

EmbeddingSequence tile_speaker(const EmbeddingSequence& s, Eigen::Index frames) {
  s.validate();
  if (s.frames() != 1) throw ValidationError("tile: speaker embedding must be a single row");
  if (frames < 1) throw ValidationError("tile: target frame count must be >= 1");
  EmbeddingSequence out;
  out.kind = s.kind;
  out.frame_rate = s.frame_rate;
  out.values = s.values.row(0).replicate(frames, 1);
  return out;
}

EmbeddingSequence concat_fuse(const std::vector<EmbeddingSequence>& embs) {
  if (embs.empty()) throw ValidationError("concat: no inputs");
  const Eigen::Index t = embs.front().frames();
  Eigen::Index total = 0;
  for (const auto& e : embs) {
    e.validate();
    if (e.frames() != t) throw ValidationError("concat: frame counts differ");
    total += e.dim();
  }
  EmbeddingSequence out;
  out.kind = embs.front().kind;
  out.frame_rate = embs.front().frame_rate;
  out.values.resize(t, total);
  Eigen::Index col = 0;
  for (const auto& e : embs) {
    out.values.middleCols(col, e.dim()) = e.values;
    col += e.dim();
  }
  return out;
}

EmbeddingSequence make_clustered_embeddings(uint64_t seed, Eigen::Index frames,
                                            Eigen::Index dim, int clusters,
                                            double spread, double frame_rate) {
  if (frames < 1 || dim < 1 || clusters < 1) {
    throw ValidationError("clustered embeddings: sizes must be positive");
  }
  Prng rng(seed, 0x636c7573);  // "clus"
  Eigen::MatrixXd means(clusters, dim);
  for (Eigen::Index c = 0; c < clusters; ++c) {
    for (Eigen::Index d = 0; d < dim; ++d) means(c, d) = rng.normal();
  }

  EmbeddingSequence out;
  out.kind = EmbeddingKind::kLip;
  out.frame_rate = frame_rate;
  out.values.resize(frames, dim);
  Eigen::Index t = 0;
  while (t < frames) {
    // Phone-like runs of 2..8 frames on one cluster.
    const auto run = static_cast<Eigen::Index>(2 + rng.uniform_int(7));
    const auto cluster = static_cast<Eigen::Index>(rng.uniform_int(static_cast<uint64_t>(clusters)));
    for (Eigen::Index i = 0; i < run && t < frames; ++i, ++t) {
      for (Eigen::Index d = 0; d < dim; ++d) {
        out.values(t, d) = means(cluster, d) + spread * rng.normal();
      }
    }
  }
  return out;
}

}  // namespace mmtss
