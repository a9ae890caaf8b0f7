"""Single-threaded callback event loops driving all transport machinery.

Two interchangeable implementations share one interface: a wall-clock loop
that multiplexes real sockets through ``selectors``, and a virtual-clock
loop that runs discrete-event simulations with no I/O and no sleeping.
Connection state machines, racing timers, and simulated links all schedule
work through this interface, so the same protocol code runs in both worlds.
"""

from __future__ import annotations

import heapq
import itertools
import logging
import os
import selectors
import threading
import time
from typing import Any, Callable, Optional

logger = logging.getLogger(__name__)

__all__ = ["TimerHandle", "EventLoop", "RealEventLoop", "SimEventLoop"]


class TimerHandle:
    """Cancellation token for a scheduled callback."""

    __slots__ = ("when", "_fn", "_args", "cancelled")

    def __init__(self, when: float, fn: Callable, args: tuple):
        self.when = when
        self._fn = fn
        self._args = args
        self.cancelled = False

    def cancel(self) -> None:
        self.cancelled = True
        self._fn = None
        self._args = ()

    def _run(self) -> None:
        if not self.cancelled:
            self._fn(*self._args)


class EventLoop:
    """Base scheduler: a timer heap plus a ready queue.

    Callbacks run serially in scheduling order; a callback must never block.
    Subclasses supply the clock and the idle-wait strategy.
    """

    def __init__(self) -> None:
        self._timers: list[tuple[float, int, TimerHandle]] = []
        self._seq = itertools.count()
        self._ready: list[TimerHandle] = []
        self._running = False
        self._stopping = False
        self._lock = threading.Lock()

    # -- clock -------------------------------------------------------------

    def now(self) -> float:
        raise NotImplementedError

    # -- scheduling --------------------------------------------------------

    def call_soon(self, fn: Callable, *args: Any) -> TimerHandle:
        handle = TimerHandle(self.now(), fn, args)
        with self._lock:
            self._ready.append(handle)
        self._wake()
        return handle

    # Alias used by embedders calling in from other threads; both loops
    # serialize through the same queue.
    call_soon_threadsafe = call_soon

    def call_at(self, when: float, fn: Callable, *args: Any) -> TimerHandle:
        handle = TimerHandle(when, fn, args)
        with self._lock:
            heapq.heappush(self._timers, (when, next(self._seq), handle))
        self._wake()
        return handle

    def call_later(self, delay: float, fn: Callable, *args: Any) -> TimerHandle:
        return self.call_at(self.now() + max(0.0, delay), fn, *args)

    # -- running -----------------------------------------------------------

    def stop(self) -> None:
        self._stopping = True
        self._wake()

    def run_forever(self) -> None:
        """Run until stop() or, for the simulated loop, until quiescent."""
        self._running = True
        self._stopping = False
        try:
            while not self._stopping:
                if not self._run_once():
                    break
        finally:
            self._running = False

    def run_until(self, predicate: Callable[[], bool],
                  timeout: Optional[float] = None) -> bool:
        """Drive the loop until predicate() holds; returns its final value.

        ``timeout`` is measured on this loop's clock (virtual seconds for the
        simulated loop).
        """
        deadline = None if timeout is None else self.now() + timeout
        self._stopping = False
        while not predicate():
            if deadline is not None and self.now() >= deadline:
                return predicate()
            if self._stopping or not self._run_once(deadline):
                break
        return predicate()

    # -- internals ---------------------------------------------------------

    def _pop_ready(self) -> list[TimerHandle]:
        with self._lock:
            batch, self._ready = self._ready, []
        return batch

    def _run_ready(self) -> int:
        count = 0
        for handle in self._pop_ready():
            handle._run()
            count += 1
        return count

    def _due_timers(self, now: float) -> list[TimerHandle]:
        due = []
        with self._lock:
            while self._timers and self._timers[0][0] <= now:
                _, _, handle = heapq.heappop(self._timers)
                if not handle.cancelled:
                    due.append(handle)
        return due

    def _next_deadline(self) -> Optional[float]:
        with self._lock:
            while self._timers and self._timers[0][2].cancelled:
                heapq.heappop(self._timers)
            return self._timers[0][0] if self._timers else None

    def _run_once(self, deadline: Optional[float] = None) -> bool:
        """Process one batch of work; False means nothing left to do."""
        raise NotImplementedError

    def _wake(self) -> None:
        pass


class SimEventLoop(EventLoop):
    """Virtual-clock loop: time jumps to the next scheduled event.

    Deterministic by construction — ties are broken by scheduling order and
    there is no I/O. The clock starts at zero and only moves when the loop
    dispatches a timer.
    """

    def __init__(self, start: float = 0.0) -> None:
        super().__init__()
        self._now = start

    def now(self) -> float:
        return self._now

    def _run_once(self, deadline: Optional[float] = None) -> bool:
        if self._run_ready():
            return True
        nxt = self._next_deadline()
        if nxt is None:
            return False
        if deadline is not None and nxt > deadline:
            self._now = deadline
            return False
        self._now = max(self._now, nxt)
        for handle in self._due_timers(self._now):
            handle._run()
        return True

    def run_to_quiescence(self, max_time: Optional[float] = None) -> float:
        """Run until no work remains (or the virtual clock passes max_time);
        returns the final virtual time."""
        limit = None if max_time is None else max_time
        while True:
            if limit is not None and self._now >= limit:
                break
            if not self._run_once(limit):
                break
        return self._now


class RealEventLoop(EventLoop):
    """Wall-clock loop multiplexing nonblocking sockets via ``selectors``."""

    def __init__(self) -> None:
        super().__init__()
        self._selector = selectors.DefaultSelector()
        self._readers: dict[int, Callable] = {}
        self._writers: dict[int, Callable] = {}
        # Self-pipe so cross-thread call_soon can interrupt a blocking select.
        self._wake_r, self._wake_w = os.pipe()
        os.set_blocking(self._wake_r, False)
        self._selector.register(self._wake_r, selectors.EVENT_READ, None)

    def now(self) -> float:
        return time.monotonic()

    # -- socket readiness ----------------------------------------------------

    def _events_for(self, fd: int) -> int:
        events = 0
        if fd in self._readers:
            events |= selectors.EVENT_READ
        if fd in self._writers:
            events |= selectors.EVENT_WRITE
        return events

    def _update(self, fd: int, sock) -> None:
        events = self._events_for(fd)
        registered = fd in {k.fd for k in self._selector.get_map().values()}
        if events and not registered:
            self._selector.register(sock, events, fd)
        elif events and registered:
            self._selector.modify(sock, events, fd)
        elif registered:
            self._selector.unregister(sock)

    def add_reader(self, sock, callback: Callable) -> None:
        fd = sock.fileno()
        self._readers[fd] = callback
        self._update(fd, sock)

    def remove_reader(self, sock) -> None:
        fd = sock.fileno()
        if self._readers.pop(fd, None) is not None:
            self._update(fd, sock)

    def add_writer(self, sock, callback: Callable) -> None:
        fd = sock.fileno()
        self._writers[fd] = callback
        self._update(fd, sock)

    def remove_writer(self, sock) -> None:
        fd = sock.fileno()
        if self._writers.pop(fd, None) is not None:
            self._update(fd, sock)

    def _wake(self) -> None:
        try:
            os.write(self._wake_w, b"\0")
        except OSError:
            pass

    def _run_once(self, deadline: Optional[float] = None) -> bool:
        self._run_ready()
        now = self.now()
        nxt = self._next_deadline()
        timeout = None
        if self._ready:
            timeout = 0.0
        elif nxt is not None:
            timeout = max(0.0, nxt - now)
        if deadline is not None:
            remaining = max(0.0, deadline - now)
            timeout = remaining if timeout is None else min(timeout, remaining)
        if timeout is None and not self._selector.get_map().keys() - {self._wake_r}:
            # Nothing scheduled and nothing registered beyond the wake pipe.
            if not self._ready:
                return False
        events = self._selector.select(timeout)
        for key, mask in events:
            if key.data is None:  # wake pipe
                try:
                    while os.read(self._wake_r, 4096):
                        pass
                except (BlockingIOError, OSError):
                    pass
                continue
            fd = key.data
            if mask & selectors.EVENT_READ and fd in self._readers:
                self._readers[fd]()
            if mask & selectors.EVENT_WRITE and fd in self._writers:
                self._writers[fd]()
        for handle in self._due_timers(self.now()):
            handle._run()
        self._run_ready()
        return True

    def close(self) -> None:
        try:
            self._selector.unregister(self._wake_r)
        except KeyError:
            pass
        os.close(self._wake_r)
        os.close(self._wake_w)
        self._selector.close()
