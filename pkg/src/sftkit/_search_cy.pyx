# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled membership search kernel.

Same algorithm, same memo keys, same node accounting as the pure kernel in
_search_py.py; the two are interchangeable and must return identical
(status, counts, nodes) triples. Residual arithmetic runs on C integers;
callers guarantee scaled magnitudes fit (entries < 2**20, weights and
targets < 2**30), which bounds every intermediate well inside 64 bits.
"""

from libc.stdlib cimport malloc, free

ENGINE_NAME = "cython"

FOUND = 0
NOT_MEMBER = 1
BUDGET = 2


def run_search(gens, weights, minw_suffix, pos_masks, neg_masks,
               target, wtarget, allowance, memo):
    cdef Py_ssize_t ngens = len(gens)
    cdef Py_ssize_t dim = len(target)
    cdef Py_ssize_t i, k, d
    cdef long long wres, c, cmax, w, nodes = 0, allow = allowance
    cdef unsigned long long needp, needn
    cdef bint ret_set = False, ret = False
    cdef Py_ssize_t depth = 0  # frames on the stack; frame d owns generator index d

    cdef long long *gflat = <long long *> malloc(ngens * dim * sizeof(long long))
    cdef long long *warr = <long long *> malloc((ngens + 1) * sizeof(long long))
    cdef long long *minw = <long long *> malloc((ngens + 1) * sizeof(long long))
    cdef unsigned long long *posm = <unsigned long long *> malloc((ngens + 1) * sizeof(unsigned long long))
    cdef unsigned long long *negm = <unsigned long long *> malloc((ngens + 1) * sizeof(unsigned long long))
    # residual scratch per depth, plus frame bookkeeping
    cdef long long *resstk = <long long *> malloc((ngens + 2) * dim * sizeof(long long))
    cdef long long *wstk = <long long *> malloc((ngens + 2) * sizeof(long long))
    cdef long long *cstk = <long long *> malloc((ngens + 2) * sizeof(long long))
    cdef long long *cmaxstk = <long long *> malloc((ngens + 2) * sizeof(long long))
    if (gflat == NULL or warr == NULL or minw == NULL or posm == NULL or
            negm == NULL or resstk == NULL or wstk == NULL or cstk == NULL or
            cmaxstk == NULL):
        free(gflat); free(warr); free(minw); free(posm); free(negm)
        free(resstk); free(wstk); free(cstk); free(cmaxstk)
        raise MemoryError()

    try:
        for i in range(ngens):
            g = gens[i]
            for k in range(dim):
                gflat[i * dim + k] = g[k]
            warr[i] = weights[i]
        for i in range(ngens + 1):
            minw[i] = minw_suffix[i]
            posm[i] = pos_masks[i]
            negm[i] = neg_masks[i]

        # current call state lives at stack slot `depth`
        for k in range(dim):
            resstk[k] = target[k]
        wres = wtarget
        i = 0

        while True:
            if not ret_set:
                if nodes >= allow:
                    return (BUDGET, None, nodes)
                nodes += 1
                if wres == 0:
                    ret = True
                    for k in range(dim):
                        if resstk[depth * dim + k] != 0:
                            ret = False
                            break
                    ret_set = True
                elif wres < 0 or i == ngens:
                    ret = False
                    ret_set = True
                else:
                    key = (tuple([resstk[depth * dim + k] for k in range(dim)]), i)
                    v = memo.get(key)
                    if v is not None:
                        ret = v >= 0
                        ret_set = True
                    elif wres < minw[i]:
                        memo[key] = -1
                        ret = False
                        ret_set = True
                    else:
                        needp = 0
                        needn = 0
                        for k in range(dim):
                            if resstk[depth * dim + k] > 0:
                                needp |= (<unsigned long long> 1) << k
                            elif resstk[depth * dim + k] < 0:
                                needn |= (<unsigned long long> 1) << k
                        if (needp & ~posm[i]) or (needn & ~negm[i]):
                            memo[key] = -1
                            ret = False
                            ret_set = True
                        else:
                            # push frame for (res, wres, i); descend with c = 0
                            wstk[depth] = wres
                            cstk[depth] = 0
                            cmaxstk[depth] = wres / warr[i]
                            for k in range(dim):
                                resstk[(depth + 1) * dim + k] = resstk[depth * dim + k]
                            depth += 1
                            i += 1
                            continue
            if depth == 0:
                break
            # unwind into frame depth-1 (its generator index is depth-1)
            d = depth - 1
            if ret:
                memo[(tuple([resstk[d * dim + k] for k in range(dim)]), d)] = cstk[d]
                depth -= 1
                ret_set = True
                ret = True
                continue
            c = cstk[d] + 1
            if c > cmaxstk[d]:
                memo[(tuple([resstk[d * dim + k] for k in range(dim)]), d)] = -1
                depth -= 1
                ret = False
                ret_set = True
                continue
            cstk[d] = c
            for k in range(dim):
                resstk[depth * dim + k] = resstk[d * dim + k] - c * gflat[d * dim + k]
            wres = wstk[d] - c * warr[d]
            i = depth
            ret_set = False

        if not ret:
            return (NOT_MEMBER, None, nodes)
        counts = [0] * ngens
        for k in range(dim):
            resstk[k] = target[k]
        i = 0
        while True:
            ret = False
            for k in range(dim):
                if resstk[k] != 0:
                    ret = True
                    break
            if not ret:
                break
            c = memo[(tuple([resstk[k] for k in range(dim)]), i)]
            if c:
                counts[i] = c
                for k in range(dim):
                    resstk[k] = resstk[k] - c * gflat[i * dim + k]
            i += 1
        return (FOUND, counts, nodes)
    finally:
        free(gflat); free(warr); free(minw); free(posm); free(negm)
        free(resstk); free(wstk); free(cstk); free(cmaxstk)
