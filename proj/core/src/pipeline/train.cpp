#include "deltamsg/pipeline/train.hpp"

namespace deltamsg::pipeline {

TrainQaResult train_qa(const std::filesystem::path& labeled, const std::filesystem::path& checkpoint,
                       const qa::QaTrainOptions& options, qa::QaTrainReport* report) {
  const auto examples = qa::load_train_examples(labeled);
  qa::QaTrainReport local;
  qa::QaTrainReport& rep = report ? *report : local;
  const qa::QaModel model = qa::train_qa_model(examples, options, &rep);
  qa::save_checkpoint(model, checkpoint);
  TrainQaResult r;
  r.checkpoint = checkpoint;
  r.examples = examples.size();
  r.final_loss = rep.scorer.losses.empty() ? 0.0 : rep.scorer.losses.back();
  r.accuracy = rep.scorer.accuracy;
  return r;
}

}  // namespace deltamsg::pipeline
