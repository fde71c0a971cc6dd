#pragma once

#include <filesystem>

#include "deltamsg/qa/model.hpp"

namespace deltamsg::pipeline {

struct TrainQaResult {
  std::filesystem::path checkpoint;
  std::size_t examples = 0;
  double final_loss = 0.0;
  double accuracy = 0.0;
};

// Loads labeled pairs, trains the QA model and writes the checkpoint.
// Throws FormatError, DegenerateLabels and IoError.
TrainQaResult train_qa(const std::filesystem::path& labeled, const std::filesystem::path& checkpoint,
                       const qa::QaTrainOptions& options, qa::QaTrainReport* report = nullptr);

}  // namespace deltamsg::pipeline
