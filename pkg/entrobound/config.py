import os
from configparser import ConfigParser
from collections import defaultdict

from entrobound.errors import ValidationError

"""
Configuration functions
"""

THREADS_ENV = "ENTROBOUND_THREADS"

DEFAULTS = {
    "sweep": {"threads": "4"},
    "counts": {"min_total": "1000"},
    "coarse": {"samples": "1000000", "nodes": "10", "seed": "12345"},
}


def read_config(file_config="entrobound.ini", section=None):
    """
    Reads the configuration file specified, filling the sections entrobound uses with defaults

    :param file_config: path to the configuration file
    :type file_config: str

    :param section: section of the file to read
    :type section: str

    :return: dictionary with the configuration
    :rtype: dict(str, dict)
    """
    config = ConfigParser()
    if file_config is not None:
        config.read(file_config)
    dictionary = defaultdict(dict)
    for name, options in DEFAULTS.items():
        dictionary[name] = dict(options)
    for name in config.sections():
        for option in config.options(name):
            dictionary[name][option] = config.get(name, option, raw=True)
    if section is not None:
        return dictionary.get(section)
    return dictionary


def get_option(cfg, section, option, cast=str):
    """
    Returns an option converted with ``cast``, falling back to the built-in default

    :param cfg: configuration as returned by :func:`read_config`
    :type cfg: dict(str, dict)

    :raises ValidationError: when the value cannot be converted
    :rtype: object
    """
    value = cfg.get(section, {}).get(option)
    if value is None:
        value = DEFAULTS[section][option]
    try:
        return cast(value)
    except (TypeError, ValueError):
        raise ValidationError("config: [%s] %s = %r is not a valid %s" % (section, option, value, cast.__name__))


def max_threads(cfg, requested=None):
    """
    Number of sweep threads: the flag (or the ini value) capped by ENTROBOUND_THREADS

    :param requested: value given on the command line, if any
    :type requested: int

    :rtype: int
    """
    threads = requested if requested is not None else get_option(cfg, "sweep", "threads", int)
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            cap = int(cap)
        except ValueError:
            raise ValidationError("config: %s=%r is not an integer" % (THREADS_ENV, cap))
        if cap < 1:
            raise ValidationError("config: %s=%d must be at least 1" % (THREADS_ENV, cap))
        threads = min(threads, cap)
    return max(1, threads)
