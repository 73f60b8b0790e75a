'''
Flat key = value configuration files for the command line.
'''
from pathlib import Path
from typing import Dict, Mapping, Union

import structlog

from dmxyz.errors import InvalidParameter

__all__ = ['load_flat_config', 'normalize_key']

logger = structlog.get_logger(__name__)


def normalize_key(key: str, aliases: Mapping[str, str] = None) -> str:
    name = key.strip().lstrip('-').lower().replace('-', '_')
    if aliases:
        name = aliases.get(name, name)
    return name


def load_flat_config(path: Union[str, Path], aliases: Mapping[str, str] = None) -> Dict[str, str]:
    '''
    Reads a flat configuration file
        # comment
        jx = 0.2
        axis = x
    INPUT
        path; file to read
        aliases; optional renaming of keys (after normalization)
    RETURNS
        dictionary of normalized keys to raw string values
    '''
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise InvalidParameter("config", str(path), f"cannot be read ({e.strerror})") from e

    values = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        key, sep, value = line.partition('=')
        if not sep or not key.strip():
            raise InvalidParameter("config", str(path), f"line {number} is not 'key = value'")
        values[normalize_key(key, aliases)] = value.strip()
    logger.debug("configuration loaded", path=str(path), keys=sorted(values))
    return values
