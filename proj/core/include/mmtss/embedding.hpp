// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_EMBEDDING_HPP_
#define MMTSS_EMBEDDING_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace mmtss {

enum class EmbeddingKind { kAcoustic, kLip, kSpeaker };

// Canonical stream dimensions: acoustic and lip embeddings are 256-d,
// speaker embeddings 128-d.
int canonical_embedding_dim(EmbeddingKind kind);

struct EmbeddingSequence {
  EmbeddingKind kind = EmbeddingKind::kAcoustic;
  Eigen::MatrixXd values;  // [frames x dim]
  double frame_rate = 0.0;

  Eigen::Index frames() const { return values.rows(); }
  Eigen::Index dim() const { return values.cols(); }
  // Finite values; pass check_dim to also enforce the canonical width.
  void validate(bool check_dim = false) const;
};

// Nearest-neighbor upsampling from K to T rows. Row t copies source row
// floor-of-center k(t) = ceil((2t + 1) * K / (2T)) - 1, i.e. the sample
// whose center is closest, ties resolved toward the earlier frame.
Eigen::Index nearest_source_row(Eigen::Index t, Eigen::Index source_rows,
                                Eigen::Index target_rows);
EmbeddingSequence upsample_nearest(const EmbeddingSequence& emb, Eigen::Index frames);

// Repeat a single-row embedding T times.
EmbeddingSequence tile_speaker(const EmbeddingSequence& s, Eigen::Index frames);

// Concatenate along the feature axis; all inputs must share T.
EmbeddingSequence concat_fuse(const std::vector<EmbeddingSequence>& embs);

// Seeded synthetic lip-style embeddings: Gaussian cluster means with
// per-frame noise, frames assigned to clusters in runs. Used by tests
// and the fusion smoke command in place of a video front-end.
EmbeddingSequence make_clustered_embeddings(uint64_t seed, Eigen::Index frames,
                                            Eigen::Index dim, int clusters,
                                            double spread, double frame_rate);

}  // namespace mmtss

#endif  // MMTSS_EMBEDDING_HPP_
