from .type_hints import ActivationName, DenseMatrix, EdgeFeatureMode, OperatorKind, SparseMatrix, Vector
