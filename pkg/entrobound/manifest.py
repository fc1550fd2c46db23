import hashlib
import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

from entrobound import __version__

FLOAT_FORMAT = "%.17g"

_FLOAT_MARK = "\x00float:"
_FLOAT_TOKEN = re.compile(r'"\\u0000float:([^"]*)"')


def format_float(value):
    """
    Fixed 17-significant-digit text of a float, as written in every JSON output

    :rtype: str
    """
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    text = FLOAT_FORMAT % value
    if not any(c in text for c in ".e"):
        text += ".0"
    return text


def plain(value):
    """
    Converts numpy scalars and containers to JSON types; floats are marked for fixed formatting
    """
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _FLOAT_MARK + format_float(float(value))
    return value


def dumps_json(document, indent=4):
    """
    Serializes ``document`` with sorted keys and 17 significant digits per float

    :rtype: str
    """
    text = json.dumps(plain(document), sort_keys=True, indent=indent)
    return _FLOAT_TOKEN.sub(lambda m: m.group(1), text)


def file_sha256(path):
    """
    SHA-256 of a file's bytes

    :rtype: str
    """
    digest = hashlib.sha256()
    with open(path, "rb") as fp:
        for block in iter(lambda: fp.read(65536), b""):
            digest.update(block)
    return digest.hexdigest()


@dataclass
class RunManifest:
    """
    **Everything needed to recompute an output file**

    Written next to every output as ``<output>.manifest.json``. It carries no
    timestamps, so identical invocations give identical manifests.

    :ivar command: subcommand that produced the output
    :ivar parameters: every resolved parameter, in SI units
    :ivar inputs: input path -> SHA-256 of its content
    :ivar seed: seed of the stochastic path, if one was used
    """

    command: str
    parameters: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    seed: int = None
    tool_version: str = __version__

    def add_input(self, path):
        self.inputs[str(path)] = file_sha256(path)

    def as_json(self):
        return {"tool_version": self.tool_version, "command": self.command, "parameters": self.parameters,
                "inputs": self.inputs, "seed": self.seed}

    def dumps(self):
        return dumps_json(self.as_json())

    def write(self, output_path):
        """
        Saves the manifest alongside ``output_path``

        :return: path of the manifest file
        :rtype: str
        """
        path = str(output_path) + ".manifest.json"
        with open(path, "w") as fp:
            fp.write(self.dumps())
        return path
