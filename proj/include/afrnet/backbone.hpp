#pragma once

#include <memory>
#include <string>

#include "afrnet/features.hpp"

namespace afrnet {

// Pretrained convolutional backbone loaded from an ONNX file. The embedding
// is the activation of the penultimate fully-connected layer when the graph
// exposes one, otherwise the network's final output. One session per
// instance; instances are not shared across threads.
class Backbone {
public:
    // Throws ModelLoadFailure if the file is missing or unreadable.
    explicit Backbone(const std::string& model_path);
    ~Backbone();
    Backbone(Backbone&&) noexcept;
    Backbone& operator=(Backbone&&) noexcept;

    // Throws ShapeMismatch when the model rejects 224x224x3 input and
    // DegenerateEmbedding on an all-zero activation.
    EmbeddingVector extract(const PreprocessedImage& image);

    const std::string& extractor_id() const { return extractor_id_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::string extractor_id_;
};

}  // namespace afrnet
