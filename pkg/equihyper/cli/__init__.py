from .config_file import (
    ConfigEntry,
    add_config_arguments,
    check_known_keys,
    format_config,
    read_config_file,
    resolve_config,
)
from .main import EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION, build_parser, main
from .model_file import MODEL_FORMAT, MODEL_VERSION, ModelFile, load_model_file, restore_model, save_model
from .options import DataOptions, GradcheckOptions, ModelOptions, OutputOptions
