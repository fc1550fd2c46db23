import logging
import threading
from dataclasses import dataclass
from enum import Enum
from threading import Thread
from time import time

import numpy as np
from scipy.optimize import bisect

from entrobound.config import max_threads, read_config
from entrobound.errors import NumericalError, ValidationError


class Status(Enum):
    """
    Possible states that a :class:`SweepPoint` could be in

    :cvar READY: Ready to execute
    :cvar RUNNING: On execution
    :cvar FINISHED: Evaluated with success
    :cvar FAILED: Evaluated with error
    """

    READY = "READY"
    RUNNING = "RUNNING"
    FINISHED = "FINISHED"
    FAILED = "FAILED"


class Spacing(Enum):
    LINEAR = "linear"
    LOG = "log"


@dataclass(frozen=True)
class SweepSpec:
    """
    **A one-dimensional parameter grid**

    :ivar variable: name of the swept parameter
    :ivar start: first value (variable units)
    :ivar stop: last value (variable units)
    :ivar points: number of grid points (>= 2)
    :ivar spacing: linear or logarithmic spacing
    """

    variable: str
    start: float
    stop: float
    points: int
    spacing: Spacing = Spacing.LINEAR

    def __post_init__(self):
        if not self.start < self.stop:
            raise ValidationError("sweep %s: start %r must be below stop %r" % (self.variable, self.start, self.stop))
        if int(self.points) < 2:
            raise ValidationError("sweep %s: at least 2 points are required, got %r" % (self.variable, self.points))
        if self.spacing is Spacing.LOG and self.start <= 0.0:
            raise ValidationError("sweep %s: a log sweep needs a positive start, got %r" % (self.variable, self.start))

    def values(self):
        """
        :return: the grid, in input order
        :rtype: numpy.ndarray
        """
        if self.spacing is Spacing.LOG:
            return np.geomspace(self.start, self.stop, int(self.points))
        return np.linspace(self.start, self.stop, int(self.points))


class SweepPoint(Thread):
    """
    **Evaluates one grid point of a sweep**

    :ivar index: position of the point in the grid
    :vartype index: int

    :ivar value: parameter value
    :vartype value: float

    :ivar status: actual :class:`Status` of the point
    :vartype status: :class:`Status`

    :ivar result: row returned by the evaluation function
    :vartype result: dict(str, object)
    """

    def __init__(self, index, value, function):
        Thread.__init__(self)
        self.index = index
        self.value = value
        self.function = function
        self.sweep = None
        self.semaphore = None
        self.result = None
        self.error = None
        self.status = Status.READY

    def set_sweep(self, sweep):
        self.sweep = sweep
        self.semaphore = sweep.sem

    def set_status(self, status):
        self.status = status
        if self.sweep is not None:
            self.sweep.logger.debug("%s[%d]: %s", self.sweep.name, self.index, self.status)

    def run(self):
        with self.semaphore:
            self.set_status(Status.RUNNING)
            try:
                self.result = self.function(self.value)
                self.set_status(Status.FINISHED)
            except Exception as e:
                self.error = e
                self.set_status(Status.FAILED)
                self.sweep.logger.error("%s[%d] (value=%r) failed: %s", self.sweep.name, self.index, self.value, e)


class Sweep(object):
    """
    **Runs a function over a parameter grid on a bounded pool of threads**

    Rows come back in grid order regardless of completion order.

    :ivar name: name of the sweep, used in logs
    :vartype name: str

    :ivar cfg: configuration
    :vartype cfg: dict(str, dict)

    :ivar points: one :class:`SweepPoint` per grid value
    :vartype points: list[]
    """

    def __init__(self, name, config=None, config_file="entrobound.ini", threads=None):
        """
        :param name: sweep name
        :type name: str

        :param config: configuration dictionary; read from ``config_file`` when None
        :type config: dict(str, dict)

        :param threads: requested thread count, capped by ENTROBOUND_THREADS
        :type threads: int
        """
        self.cfg = config if config is not None else read_config(config_file)
        self.name = name
        self.max_threads = max_threads(self.cfg, threads)
        self.sem = threading.Semaphore(self.max_threads)
        self.logger = logging.getLogger(__name__)
        self.points = []

    def add_point(self, point):
        point.set_sweep(self)
        self.points.append(point)

    def run(self, values, function):
        """
        Evaluates ``function`` at every value

        :param values: grid values
        :type values: iterable(float)

        :param function: callable returning the row of a value
        :type function: callable

        :return: rows in grid order
        :rtype: list(dict)
        """
        self.points = []
        for index, value in enumerate(values):
            self.add_point(SweepPoint(index, float(value), function))

        self.logger.debug("Running sweep: %s (%d points, %d threads)", self.name, len(self.points), self.max_threads)
        start_time = time()
        for point in self.points:
            point.start()
        for point in self.points:
            point.join()
        completed_in = time() - start_time
        self.logger.info("Sweep '%s' completed in %s seconds ---", self.name, completed_in)

        for point in self.points:
            if point.status is Status.FAILED:
                raise point.error
        return [point.result for point in self.points]


def find_threshold(function, lo, hi, xtol=1e-6, log=False):
    """
    Root of a continuous function on [lo, hi] by bisection

    :param log: bisect in log10 of the variable (for widths spanning decades)
    :type log: bool

    :return: the root, or None when the function keeps its sign on the bracket
    :rtype: float
    """
    if log:
        if lo <= 0.0:
            raise ValidationError("threshold: log bisection needs a positive bracket, got %r" % lo)
        root = find_threshold(lambda e: function(10.0 ** e), np.log10(lo), np.log10(hi), xtol=xtol)
        return None if root is None else float(10.0 ** root)
    f_lo, f_hi = function(lo), function(hi)
    if f_lo == 0.0:
        return float(lo)
    if f_hi == 0.0:
        return float(hi)
    if np.sign(f_lo) == np.sign(f_hi):
        return None
    try:
        return float(bisect(function, lo, hi, xtol=xtol))
    except (RuntimeError, ValueError) as e:
        raise NumericalError("threshold: bisection failed on [%r, %r]: %s" % (lo, hi, e))
