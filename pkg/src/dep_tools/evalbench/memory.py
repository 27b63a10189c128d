"""
Peak memory sampling.

Forked workers share the parent's copy-on-write and shared-memory pages,
so summing resident sizes would count the weight table once per worker.
Where the platform reports it we sum the proportional set size, which
splits every shared page between the processes mapping it. Otherwise the
parent contributes its RSS and each descendant its unique set size.
"""

import threading
from typing import Any, Optional

import psutil


def _footprint(member: psutil.Process, is_root: bool) -> int:
    try:
        info = member.memory_full_info()
    except psutil.AccessDenied:
        return member.memory_info().rss if is_root else 0
    pss = getattr(info, 'pss', None)
    if pss is not None:
        return int(pss)
    return int(info.rss if is_root else info.uss)


def tree_memory(process: psutil.Process) -> int:
    """Memory of a process and all of its live descendants, shared pages counted once"""
    total = 0
    for member in [process] + process.children(recursive=True):
        try:
            total += _footprint(member, member.pid == process.pid)
        except (psutil.NoSuchProcess, psutil.ZombieProcess):
            continue
    return total


class PeakMemorySampler:
    """
    High-water mark of ``tree_memory`` for the current process, sampled
    from a background thread while the context is active.
    """

    def __init__(self, interval: float = 0.05, pid: Optional[int] = None):
        self.interval = interval
        self.process = psutil.Process(pid)
        self.peak = 0
        self._stop = threading.Event()
        self._thread: Optional[threading.Thread] = None

    def _sample(self) -> None:
        try:
            self.peak = max(self.peak, tree_memory(self.process))
        except psutil.NoSuchProcess:
            pass

    def _run(self) -> None:
        while not self._stop.wait(self.interval):
            self._sample()

    def start(self) -> None:
        self._sample()
        self._stop.clear()
        self._thread = threading.Thread(target=self._run, name="memory-sampler", daemon=True)
        self._thread.start()

    def stop(self) -> int:
        self._stop.set()
        if self._thread is not None:
            self._thread.join()
            self._thread = None
        self._sample()
        return self.peak

    def __enter__(self) -> "PeakMemorySampler":
        self.start()
        return self

    def __exit__(self, *exc: Any) -> None:
        self.stop()
