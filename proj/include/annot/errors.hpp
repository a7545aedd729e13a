#pragma once

#include <stdexcept>
#include <string>

namespace annot {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// raster / image io
struct DecodeError : Error { using Error::Error; };
struct UnsupportedConversion : Error { using Error::Error; };
struct GridTooFine : Error { using Error::Error; };
struct ImageTooSmall : Error { using Error::Error; };

// transforms
struct LengthNotPowerOfTwo : Error { using Error::Error; };

// pca / models
struct DegenerateInput : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// classifiers
struct EmptyClass : Error { using Error::Error; };
struct EmptyDataset : Error { using Error::Error; };
struct PartitionMismatch : Error { using Error::Error; };
struct ZeroSplitInfo : Error { using Error::Error; };

// corpus / persistence
struct TooFewClasses : Error { using Error::Error; };
struct EmptyCorpus : Error { using Error::Error; };
struct SplitTooLarge : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };

}  // namespace annot
