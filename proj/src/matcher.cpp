#include "afrnet/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

#include "afrnet/errors.hpp"
#include "afrnet/eval.hpp"

namespace afrnet {

double magnitude(const EmbeddingVector& v) {
    double sum = 0.0;
    for (float f : v.values) sum += static_cast<double>(f) * f;
    return std::sqrt(sum);
}

SimilarityScore cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim())
        throw DimMismatch("cosine: dim " + std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()));
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        double x = a.values[i], y = b.values[i];
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if (na == 0.0 || nb == 0.0) throw ZeroVector("cosine of a zero-magnitude vector");
    double value = dot / (std::sqrt(na) * std::sqrt(nb));
    value = std::clamp(value, -1.0, 1.0);
    return {a.record_ref, b.record_ref, value};
}

MatchDecision decide(const SimilarityScore& score, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw BadThreshold("threshold must be in (0,1)");
    return {score, threshold, score.value > threshold, std::nullopt};
}

std::vector<MatchDecision> match_all(const std::vector<EmbeddingVector>& reals,
                                     const std::vector<EmbeddingVector>& altereds,
                                     double threshold, const GroundTruth* ground_truth,
                                     std::size_t jobs) {
    if (reals.empty() || altereds.empty()) throw EmptyGallery("match_all needs non-empty sets");
    if (!(threshold > 0.0 && threshold < 1.0)) throw BadThreshold("threshold must be in (0,1)");
    const std::string& id = reals.front().extractor_id;
    for (const auto& v : reals)
        if (v.extractor_id != id) throw MixedExtractors("mixed extractor ids in reals");
    for (const auto& v : altereds)
        if (v.extractor_id != id) throw MixedExtractors("mixed extractor ids across sets");

    std::vector<MatchDecision> out(reals.size() * altereds.size());
    auto run_rows = [&](std::size_t r0, std::size_t r1) {
        for (std::size_t r = r0; r < r1; ++r) {
            for (std::size_t a = 0; a < altereds.size(); ++a) {
                try {
                    MatchDecision d = decide(cosine(reals[r], altereds[a]), threshold);
                    if (ground_truth) {
                        auto it = ground_truth->find({reals[r].record_ref, altereds[a].record_ref});
                        if (it != ground_truth->end()) d.genuine = it->second;
                    }
                    out[r * altereds.size() + a] = std::move(d);
                } catch (const Error& e) {
                    throw Error("pair (" + reals[r].record_ref.str() + ", " +
                                altereds[a].record_ref.str() + "): " + e.what());
                }
            }
        }
    };

    if (jobs <= 1 || reals.size() == 1) {
        run_rows(0, reals.size());
    } else {
        std::size_t n_workers = std::min(jobs, reals.size());
        std::size_t chunk = (reals.size() + n_workers - 1) / n_workers;
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> errors(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) {
            workers.emplace_back([&, w] {
                try {
                    run_rows(w * chunk, std::min((w + 1) * chunk, reals.size()));
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : workers) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return out;
}

std::pair<RecordRef, SimilarityScore> best_match(const EmbeddingVector& altered,
                                                 const std::vector<EmbeddingVector>& reals) {
    if (reals.empty()) throw EmptyGallery("best_match on an empty gallery");
    const SimilarityScore* best = nullptr;
    std::vector<SimilarityScore> scores;
    scores.reserve(reals.size());
    for (const auto& r : reals) scores.push_back(cosine(r, altered));
    for (const auto& s : scores) {
        if (!best || s.value > best->value ||
            (s.value == best->value && s.real_ref.record_id < best->real_ref.record_id))
            best = &s;
    }
    return {best->real_ref, *best};
}

GroundTruth ground_truth_from_manifests(const Manifest& real_manifest, Level real_level,
                                        const Manifest& altered_manifest, Level altered_level) {
    GroundTruth gt;
    for (const auto& r : real_manifest.entries) {
        RecordRef rr{to_string(real_level), r.record_id};
        for (const auto& a : altered_manifest.entries) {
            RecordRef ar{to_string(altered_level), a.record_id};
            gt[{rr, ar}] = (r.identity == a.identity);
        }
    }
    return gt;
}

void dump_decisions_csv(const std::vector<MatchDecision>& decisions, std::ostream& out) {
    out << "real_ref,altered_ref,similarity,threshold,matched,genuine\n";
    for (const auto& d : decisions) {
        out << d.score.real_ref.str() << ',' << d.score.altered_ref.str() << ','
            << format_fixed(d.score.value, 4) << ',' << format_fixed(d.threshold, 2) << ','
            << (d.matched ? "true" : "false") << ','
            << (d.genuine ? (*d.genuine ? "true" : "false") : "") << '\n';
    }
}

}  // namespace afrnet
