import logging

from typing import Union

from equihyper.utils.errors import ValidationError


LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: Union[int, str] = logging.INFO) -> None:
    """
    Install a single stream handler on the `equihyper` logger.

    Library modules only create loggers; this is called by the command-line
    entry point. Calling it again replaces the previous handler.

    Parameters
    ----------
    level: Union[int, str]
        Logging level, either a `logging` constant or its name (e.g. "DEBUG").
    """
    if isinstance(level, str):
        name = level
        level = logging.getLevelName(name.upper())
        if not isinstance(level, int):
            raise ValidationError(f"Unknown log level `{name}`")

    logger = logging.getLogger("equihyper")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False
