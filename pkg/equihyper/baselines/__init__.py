from .hgnn import HypergraphConvolutionModel, LayerCache, layer_names
from .mlp import FeatureMLP
