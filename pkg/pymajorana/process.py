import sys
import logging
from threading import Thread, RLock

from six import reraise

logger = logging.getLogger(__name__)


class TaskPool(object):
    """
    Evaluates independent tasks on up to ``jobs`` daemon threads and
    returns the results in input order. LAPACK releases the GIL, so
    diagonalizations of separate parameter points overlap. The first
    failure stops the remaining workers and is re-raised on the caller.
    """

    def __init__(self, jobs=1, name='Sweep'):
        self.jobs = max(1, int(jobs))
        self.name = name
        self._lock = RLock()
        self._exc_info = None
        self._next = 0

    def _take(self, total):
        with self._lock:
            if self._exc_info is not None or self._next >= total:
                return None
            index = self._next
            self._next += 1
            return index

    def _run(self, func, items, results):
        while True:
            index = self._take(len(items))
            if index is None:
                break

            try:
                results[index] = func(items[index])
            except Exception:
                logger.exception('Task %d aborted:', index)
                with self._lock:
                    if self._exc_info is None:
                        self._exc_info = sys.exc_info()
                break

    def map(self, func, items):
        items = list(items)
        results = [None] * len(items)
        with self._lock:
            self._exc_info = None
            self._next = 0

        if self.jobs == 1 or len(items) <= 1:
            for i, item in enumerate(items):
                results[i] = func(item)
            return results

        threads = []
        for i in range(min(self.jobs, len(items))):
            thread = Thread(target=self._run, args=(func, items, results),
                            name='%s-%d' % (self.name, i))
            thread.daemon = True
            thread.start()
            threads.append(thread)

        for thread in threads:
            thread.join()

        with self._lock:
            exc_info = self._exc_info
            self._exc_info = None

        if exc_info is not None:
            reraise(*exc_info)

        return results
