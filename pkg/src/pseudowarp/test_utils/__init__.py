from .fixtures import SEEDS, decomposition, double_polar, initial_data, random_canonical_data, seed_dict, seed_document
from .testing import (
    CliOutput,
    SubprocessCallException,
    TempDirTestCase,
    assert_vectors_close,
    parse_flag_from_env,
    run_cli,
    run_command,
    slow,
)
