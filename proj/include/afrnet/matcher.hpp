#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "afrnet/features.hpp"

namespace afrnet {

struct SimilarityScore {
    RecordRef real_ref;
    RecordRef altered_ref;
    double value = 0.0;  // clamped to [-1, 1]
};

struct MatchDecision {
    SimilarityScore score;
    double threshold = 0.0;
    bool matched = false;                 // score.value > threshold, strict
    std::optional<bool> genuine;          // ground truth, when known
};

double magnitude(const EmbeddingVector& v);

// Cosine similarity dot / (|a||b|), accumulated in double, clamped to [-1,1].
// Throws DimMismatch / ZeroVector.
SimilarityScore cosine(const EmbeddingVector& a, const EmbeddingVector& b);

// Strict > at the boundary ("exceeds"). Throws BadThreshold outside (0,1).
MatchDecision decide(const SimilarityScore& score, double threshold);

using GroundTruth = std::map<std::pair<RecordRef, RecordRef>, bool>;

// All |reals| x |altereds| decisions in real-major, altered-minor order.
// jobs > 1 partitions the real axis across threads; output order is canonical
// regardless.
std::vector<MatchDecision> match_all(const std::vector<EmbeddingVector>& reals,
                                     const std::vector<EmbeddingVector>& altereds,
                                     double threshold,
                                     const GroundTruth* ground_truth = nullptr,
                                     std::size_t jobs = 1);

// Argmax over the gallery; ties broken by smallest record_id.
std::pair<RecordRef, SimilarityScore> best_match(const EmbeddingVector& altered,
                                                 const std::vector<EmbeddingVector>& reals);

// Genuine iff identities are equal.
GroundTruth ground_truth_from_manifests(const Manifest& real_manifest, Level real_level,
                                        const Manifest& altered_manifest, Level altered_level);

// CSV: real_ref,altered_ref,similarity,threshold,matched,genuine
// (similarity at 4 decimal places).
void dump_decisions_csv(const std::vector<MatchDecision>& decisions, std::ostream& out);

}  // namespace afrnet
