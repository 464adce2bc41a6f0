"""Neural engine: attention encoder-decoder with constrained beam search."""

from .model import DEFAULT_DIMS, REFERENCE_DIMS, NeuralModel, init_model
from .gradients import loss_and_grad
from .training import TrainConfig, train
from .search import BeamConfig, NeuralHypothesis, beam_decode, prefix_decode
