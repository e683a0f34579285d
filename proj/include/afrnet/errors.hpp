#pragma once

#include <stdexcept>
#include <string>

namespace afrnet {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define AFRNET_ERROR(Name)                     \
    struct Name : Error {                      \
        using Error::Error;                    \
    }

// dataset
AFRNET_ERROR(UnparseableName);
AFRNET_ERROR(UnknownAlterationTag);
AFRNET_ERROR(DuplicateSource);
AFRNET_ERROR(EncodeFailure);
AFRNET_ERROR(DecodeFailure);
AFRNET_ERROR(InvalidFraction);
AFRNET_ERROR(BadParameter);

// features
AFRNET_ERROR(EmptyImage);
AFRNET_ERROR(ModelLoadFailure);
AFRNET_ERROR(ShapeMismatch);
AFRNET_ERROR(DegenerateEmbedding);
AFRNET_ERROR(MixedExtractors);
AFRNET_ERROR(CorruptCache);
AFRNET_ERROR(DimMismatch);

// matcher
AFRNET_ERROR(ZeroVector);
AFRNET_ERROR(BadThreshold);
AFRNET_ERROR(EmptyGallery);

// eval
AFRNET_ERROR(EmptyEvaluation);
AFRNET_ERROR(MissingGroundTruth);
AFRNET_ERROR(InsufficientData);
AFRNET_ERROR(MissingEmbeddings);

// stats
AFRNET_ERROR(LengthMismatch);
AFRNET_ERROR(ConstantSeries);
AFRNET_ERROR(BadDf);

#undef AFRNET_ERROR

}  // namespace afrnet
