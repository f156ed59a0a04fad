from .norms import OpnormConfig, inf_norm, opnorm_power_iteration
from .projection import FEASIBILITY_RTOL, project_row_l1, project_rows_l1
from .sparse import as_dense, as_sparse, check_sparse, sparse_identity, spmm
