from classifier.llsr import LlsrModel, fit, predict, predict_batch, one_hot

__all__ = ["LlsrModel", "fit", "predict", "predict_batch", "one_hot"]
