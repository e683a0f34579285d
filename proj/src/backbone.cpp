#include "afrnet/backbone.hpp"

#include <cstring>
#include <filesystem>

#include <opencv2/dnn.hpp>

#include "afrnet/errors.hpp"

namespace afrnet {

struct Backbone::Impl {
    cv::dnn::Net net;
};

Backbone::Backbone(const std::string& model_path) : extractor_id_("vgg16-fc2") {
    if (!std::filesystem::exists(model_path))
        throw ModelLoadFailure("model file not found: " + model_path);
    try {
        auto net = cv::dnn::readNetFromONNX(model_path);
        if (net.empty()) throw ModelLoadFailure("empty network: " + model_path);
        impl_ = std::make_unique<Impl>(Impl{std::move(net)});
    } catch (const cv::Exception& e) {
        throw ModelLoadFailure("cannot load " + model_path + ": " + e.what());
    }
}

Backbone::~Backbone() = default;
Backbone::Backbone(Backbone&&) noexcept = default;
Backbone& Backbone::operator=(Backbone&&) noexcept = default;

EmbeddingVector Backbone::extract(const PreprocessedImage& image) {
    constexpr int side = PreprocessedImage::kSide;
    int shape[4] = {1, 3, side, side};
    cv::Mat blob(4, shape, CV_32F);
    std::memcpy(blob.ptr<float>(), image.tensor.data(), image.tensor.size() * sizeof(float));

    cv::Mat result;
    try {
        impl_->net.setInput(blob);
        result = impl_->net.forward();
    } catch (const cv::Exception& e) {
        throw ShapeMismatch(std::string("model rejected 224x224x3 input: ") + e.what());
    }

    cv::Mat flat = result.reshape(1, 1);
    EmbeddingVector v;
    v.record_ref = image.provenance;
    v.extractor_id = extractor_id_;
    v.values.assign(flat.ptr<float>(), flat.ptr<float>() + flat.total());
    if (v.values.empty()) throw ShapeMismatch("model produced an empty output");

    bool all_zero = true;
    for (float f : v.values)
        if (f != 0.0f) {
            all_zero = false;
            break;
        }
    if (all_zero)
        throw DegenerateEmbedding("all-zero activation for " + image.provenance.str());
    return v;
}

}  // namespace afrnet
