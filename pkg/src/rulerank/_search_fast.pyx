# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled literal-search kernels.

Same contract and bit-identical results as _search_py; see that module for
the gain definition.  Threshold candidates are swept once over the merged
sorted values with running prefix counts, so a column costs O(M log M) for
the sort plus O(U) for the U unique values.
"""

from libc.math cimport log2, isnan, INFINITY
from libc.stdlib cimport malloc, free, qsort

import numpy as np


cdef int _cmp_double(const void* a, const void* b) noexcept nogil:
    cdef double x = (<const double*> a)[0]
    cdef double y = (<const double*> b)[0]
    if x < y:
        return -1
    if x > y:
        return 1
    return 0


cdef inline double _gain(long tp, long fp, long pos_total, long neg_total) noexcept nogil:
    if tp == 0:
        return 0.0
    return tp * (log2(<double> tp / <double> (tp + fp))
                 - log2(<double> pos_total / <double> (pos_total + neg_total)))


def best_numeric_split(double[::1] xs_pos, double[::1] xs_neg, double[::1] banned):
    """Best threshold literal over one numeric column.

    Returns (found, gain, is_leq, threshold); see _search_py for semantics.
    """
    cdef long p_total = xs_pos.shape[0]
    cdef long n_total = xs_neg.shape[0]
    cdef long nb = banned.shape[0]
    cdef double* pos = <double*> malloc(p_total * sizeof(double) if p_total else sizeof(double))
    cdef double* neg = <double*> malloc(n_total * sizeof(double) if n_total else sizeof(double))
    if pos == NULL or neg == NULL:
        free(pos)
        free(neg)
        raise MemoryError()

    cdef long p_fin = 0, n_fin = 0
    cdef long k
    for k in range(p_total):
        if not isnan(xs_pos[k]):
            pos[p_fin] = xs_pos[k]
            p_fin += 1
    for k in range(n_total):
        if not isnan(xs_neg[k]):
            neg[n_fin] = xs_neg[k]
            n_fin += 1

    cdef bint found = False
    cdef double best_leq = -INFINITY, best_gt = -INFINITY
    cdef double best_leq_thr = 0.0, best_gt_thr = 0.0
    cdef double v, g
    cdef long i = 0, j = 0, cp = 0, cn = 0, bi = 0, tp, fp

    with nogil:
        qsort(pos, p_fin, sizeof(double), _cmp_double)
        qsort(neg, n_fin, sizeof(double), _cmp_double)
        while i < p_fin or j < n_fin:
            if i < p_fin and (j >= n_fin or pos[i] <= neg[j]):
                v = pos[i]
            else:
                v = neg[j]
            while i < p_fin and pos[i] == v:
                i += 1
                cp += 1
            while j < n_fin and neg[j] == v:
                j += 1
                cn += 1
            while bi < nb and banned[bi] < v:
                bi += 1
            if bi < nb and banned[bi] == v:
                continue
            found = True
            g = _gain(cp, cn, p_total, n_total)
            if g > best_leq:
                best_leq = g
                best_leq_thr = v
            tp = p_fin - cp
            fp = n_fin - cn
            if tp + fp > 0:
                g = _gain(tp, fp, p_total, n_total)
                if g > best_gt:
                    best_gt = g
                    best_gt_thr = v

    free(pos)
    free(neg)
    if not found:
        return False, -INFINITY, True, 0.0
    if best_gt > best_leq:
        return True, best_gt, False, best_gt_thr
    return True, best_leq, True, best_leq_thr


def best_categorical_split(int[::1] codes_pos, int[::1] codes_neg, long n_codes, int[::1] banned):
    """Best equality / inequality literal over one categorical column.

    Returns (found, gain, is_eq, code); see _search_py for semantics.
    """
    cdef long p_total = codes_pos.shape[0]
    cdef long n_total = codes_neg.shape[0]
    cdef long* cp = <long*> malloc(n_codes * sizeof(long) if n_codes else sizeof(long))
    cdef long* cn = <long*> malloc(n_codes * sizeof(long) if n_codes else sizeof(long))
    cdef char* ok = <char*> malloc(n_codes * sizeof(char) if n_codes else sizeof(char))
    if cp == NULL or cn == NULL or ok == NULL:
        free(cp)
        free(cn)
        free(ok)
        raise MemoryError()

    cdef double best_eq = -INFINITY, best_neq = -INFINITY
    cdef long best_eq_code = -1, best_neq_code = -1
    cdef double g
    cdef long k, c, tp, fp

    with nogil:
        for c in range(n_codes):
            cp[c] = 0
            cn[c] = 0
            ok[c] = 1
        for k in range(p_total):
            if codes_pos[k] >= 0:
                cp[codes_pos[k]] += 1
        for k in range(n_total):
            if codes_neg[k] >= 0:
                cn[codes_neg[k]] += 1
        for k in range(banned.shape[0]):
            if 0 <= banned[k] < n_codes:
                ok[banned[k]] = 0
        for c in range(n_codes):
            if not ok[c] or cp[c] + cn[c] == 0:
                continue
            g = _gain(cp[c], cn[c], p_total, n_total)
            if g > best_eq:
                best_eq = g
                best_eq_code = c
            tp = p_total - cp[c]
            fp = n_total - cn[c]
            if tp + fp > 0:
                g = _gain(tp, fp, p_total, n_total)
                if g > best_neq:
                    best_neq = g
                    best_neq_code = c

    free(cp)
    free(cn)
    free(ok)
    if best_eq_code < 0 and best_neq_code < 0:
        return False, -INFINITY, True, -1
    if best_neq > best_eq:
        return True, best_neq, False, best_neq_code
    return True, best_eq, True, best_eq_code
