import json
import logging
import os
import sys
from pathlib import Path
from typing import Union

# environment variable capping the worker pool used by pair mapping
THREADS_ENV_VAR = 'HOROBM_THREADS'

YES_ANSWERS = ('y', 'ye', 'yes')
NO_ANSWERS = ('n', 'no')


def get_input_path(path: Union[str, Path], check_exist: bool = True) -> Path:
    path = Path(path)
    if check_exist:
        assert path.exists(), f'{path} does not exist!'
    return path


def confirm_overwrite(question: str) -> bool:
    """
    Ask on stdin whether to write into an existing location; an empty answer means yes.
    """
    while True:
        print(f'{question} [Y/n] ', end='')
        answer = input().strip().lower()
        if answer == '' or answer in YES_ANSWERS:
            return True
        if answer in NO_ANSWERS:
            return False
        print('Please answer y or n')


def get_output_dir(dir_path: Union[str, Path], overwrite_warning: bool = True) -> Path:
    dir_path = Path(dir_path)

    # reports are overwritten file by file, so an existing directory is only confirmed, never wiped
    if overwrite_warning and dir_path.is_dir() and any(dir_path.iterdir()):
        if not confirm_overwrite(f'{dir_path} already exists and is not empty, write into it anyway?'):
            logging.info(f'Leaving {dir_path} untouched')
            sys.exit(0)

    dir_path.mkdir(exist_ok=True, parents=True)
    return dir_path


def read_json_file(file_path: Union[str, Path], file_desc: str = 'JSON object'):
    file_path = get_input_path(file_path)
    logging.info(f'Reading {file_desc} from {file_path} ...')
    with open(file_path, 'r') as fin:
        return json.load(fin)


def write_json_file(json_obj, file_path: Union[str, Path], file_desc: str = 'JSON object'):
    # sorted keys and a trailing newline keep reports byte-stable
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    logging.info(f'Writing {file_desc} to {file_path} ...')
    with open(file_path, 'w') as fout:
        json.dump(json_obj, fout, indent=1, sort_keys=True)
        fout.write('\n')


def get_num_threads(num_threads: int = None) -> int:
    if num_threads is not None:
        assert num_threads >= 1, f'invalid number of threads: {num_threads}'
        return num_threads
    env_value = os.environ.get(THREADS_ENV_VAR)
    if env_value:
        return max(1, int(env_value))
    return min(4, os.cpu_count() or 1)
