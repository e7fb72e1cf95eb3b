"""Array kernels behind the graph and propagation modules.

Everything here takes and returns plain numpy arrays so that the same code
runs compiled (numba) or interpreted (``ROLPA_DISABLE_JIT=1``).  Random
numbers are never drawn inside a kernel; callers pass pre-drawn uniforms,
which keeps both paths on one random stream.
"""

import numpy as np

from ._jit import njit

# vote modes for sweep()
UNIT = 0  # every neighbour counts 1
SCORED = 1  # neighbour counts its hop score
BALANCING = 2  # 1 + density_norm(community) - loyalty_norm(neighbour)
CONVERGING = 3  # score * (1 + loyalty_norm(neighbour) * centrality(neighbour))

# layout of the ``bounds`` array: min/span of density over live communities and
# of loyalty over nodes, taken at the end of the previous iteration
D_MIN, D_SPAN, L_MIN, L_SPAN = 0, 1, 2, 3

TIE_RTOL = 1e-12


@njit
def component_labels(indptr, indices):
    n = len(indptr) - 1
    comp = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    ncomp = 0
    for root in range(n):
        if comp[root] >= 0:
            continue
        comp[root] = ncomp
        head = 0
        tail = 1
        queue[0] = root
        while head < tail:
            u = queue[head]
            head += 1
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                if comp[v] < 0:
                    comp[v] = ncomp
                    queue[tail] = v
                    tail += 1
        ncomp += 1
    return comp


@njit
def constraint_values(indptr, indices, standard):
    """Constraint per node with undirected tie strength p_ij = 1/deg(i).

    ``standard=False``: sum over ordered neighbour pairs (j, q), q adjacent
    to j, of (p_iq * p_qj)^2.  ``standard=True``: Burt's usual
    sum_j (p_ij + sum_q p_iq * p_qj)^2.
    """
    n = len(indptr) - 1
    out = np.zeros(n, dtype=np.float64)
    mark = np.full(n, -1, dtype=np.int64)
    indirect = np.zeros(n, dtype=np.float64)
    for i in range(n):
        di = indptr[i + 1] - indptr[i]
        if di == 0:
            continue
        for e in range(indptr[i], indptr[i + 1]):
            mark[indices[e]] = i
        total = 0.0
        if not standard:
            for e in range(indptr[i], indptr[i + 1]):
                q = indices[e]
                dq = indptr[q + 1] - indptr[q]
                shared = 0
                for f in range(indptr[q], indptr[q + 1]):
                    if mark[indices[f]] == i:
                        shared += 1
                if shared:
                    p = 1.0 / (di * dq)
                    total += shared * p * p
        else:
            piq = 1.0 / di
            for e in range(indptr[i], indptr[i + 1]):
                q = indices[e]
                pqj = 1.0 / (indptr[q + 1] - indptr[q])
                for f in range(indptr[q], indptr[q + 1]):
                    j = indices[f]
                    if mark[j] == i:
                        indirect[j] += piq * pqj
            for e in range(indptr[i], indptr[i + 1]):
                j = indices[e]
                s = piq + indirect[j]
                total += s * s
                indirect[j] = 0.0
        out[i] = total
    return out


@njit
def _clip01(x):
    if x < 0.0:
        return 0.0
    if x > 1.0:
        return 1.0
    return x


@njit
def _density(size, edges):
    if size < 2:
        return 0.0
    return 2.0 * edges / (size * (size - 1.0))


@njit
def _vote(mode, j, label, indptr, scores, comm_size, comm_edges, intra_degree, bounds, centrality):
    if mode == UNIT:
        return 1.0
    if mode == SCORED:
        return scores[j]
    loyalty = intra_degree[j] / (indptr[j + 1] - indptr[j])
    lnorm = _clip01((loyalty - bounds[L_MIN]) / bounds[L_SPAN]) if bounds[L_SPAN] > 0.0 else 0.0
    if mode == BALANCING:
        dens = _density(comm_size[label], comm_edges[label])
        dnorm = _clip01((dens - bounds[D_MIN]) / bounds[D_SPAN]) if bounds[D_SPAN] > 0.0 else 0.0
        return 1.0 + dnorm - lnorm
    return scores[j] * (1.0 + lnorm * centrality[j])


@njit
def sweep(indptr, indices, order, tie_u, labels, scores, mode, keep_current, delta,
          bounds, centrality, comm_size, comm_edges, intra_degree, acc, seen, touched, ops):
    """One asynchronous pass over ``order``; returns the number of label changes.

    Per node the label with the largest summed neighbour vote wins.  Votes
    read the live community sizes, intra edge counts and intra degrees,
    normalised with the frozen ``bounds``; ``centrality`` is also frozen.  The
    current label is kept when it is among the maxima (if ``keep_current``),
    otherwise ``tie_u[pos]`` picks among the tied labels.  Community sizes, intra
    community edge counts and intra degrees are updated in place on every
    move, and the mover's hop score becomes the best score among neighbours
    already holding the adopted label minus ``delta`` (clamped to [0, 1]).

    ``acc``/``seen`` are length-n scratch arrays (zero/False on entry and
    exit), ``touched`` is scratch of length >= max degree.  ``ops[0]``
    accumulates elementary neighbour visits.
    """
    changed = 0
    use_scores = mode != UNIT
    for pos in range(len(order)):
        i = order[pos]
        start = indptr[i]
        end = indptr[i + 1]
        if start == end:
            continue
        nt = 0
        for e in range(start, end):
            j = indices[e]
            lab = labels[j]
            if not seen[lab]:
                seen[lab] = True
                touched[nt] = lab
                nt += 1
            acc[lab] += _vote(mode, j, lab, indptr, scores, comm_size, comm_edges,
                              intra_degree, bounds, centrality)
        best = acc[touched[0]]
        for t in range(1, nt):
            if acc[touched[t]] > best:
                best = acc[touched[t]]
        floor = best - TIE_RTOL * max(1.0, abs(best))
        cur = labels[i]
        new = cur
        if not (keep_current and seen[cur] and acc[cur] >= floor):
            nties = 0
            for t in range(nt):
                if acc[touched[t]] >= floor:
                    nties += 1
            pick = int(tie_u[pos] * nties)
            if pick >= nties:
                pick = nties - 1
            for t in range(nt):
                if acc[touched[t]] >= floor:
                    if pick == 0:
                        new = touched[t]
                        break
                    pick -= 1
        for t in range(nt):
            acc[touched[t]] = 0.0
            seen[touched[t]] = False
        ops[0] += (end - start) + 1
        if new == cur:
            continue
        own = 0
        best_score = 0.0
        for e in range(start, end):
            j = indices[e]
            lab = labels[j]
            if lab == cur:
                intra_degree[j] -= 1
                comm_edges[cur] -= 1
            elif lab == new:
                intra_degree[j] += 1
                comm_edges[new] += 1
                own += 1
                if scores[j] > best_score:
                    best_score = scores[j]
        intra_degree[i] = own
        comm_size[cur] -= 1
        comm_size[new] += 1
        labels[i] = new
        if use_scores:
            s = best_score - delta
            if s < 0.0:
                s = 0.0
            elif s > 1.0:
                s = 1.0
            scores[i] = s
        ops[0] += end - start
        changed += 1
    return changed


@njit
def unsatisfied_count(indptr, indices, labels, scores, mode, bounds, centrality,
                      comm_size, comm_edges, intra_degree, acc, seen, touched):
    """Number of nodes whose label does not attain the maximal neighbour vote."""
    bad = 0
    n = len(indptr) - 1
    for i in range(n):
        start = indptr[i]
        end = indptr[i + 1]
        if start == end:
            continue
        nt = 0
        for e in range(start, end):
            j = indices[e]
            lab = labels[j]
            if not seen[lab]:
                seen[lab] = True
                touched[nt] = lab
                nt += 1
            acc[lab] += _vote(mode, j, lab, indptr, scores, comm_size, comm_edges,
                              intra_degree, bounds, centrality)
        best = acc[touched[0]]
        for t in range(1, nt):
            if acc[touched[t]] > best:
                best = acc[touched[t]]
        floor = best - TIE_RTOL * max(1.0, abs(best))
        cur = labels[i]
        if not (seen[cur] and acc[cur] >= floor):
            bad += 1
        for t in range(nt):
            acc[touched[t]] = 0.0
            seen[touched[t]] = False
    return bad


@njit
def minmax_normalize(values, live, out):
    """Min-max rescale ``values[live]`` into ``out``; all zero if degenerate.

    Returns ``(min, span)`` of the live values.
    """
    lo = np.inf
    hi = -np.inf
    for k in range(len(values)):
        if live[k]:
            v = values[k]
            if v < lo:
                lo = v
            if v > hi:
                hi = v
    span = hi - lo
    for k in range(len(values)):
        if live[k] and span > 0.0:
            out[k] = (values[k] - lo) / span
        else:
            out[k] = 0.0
    if hi < lo:
        return 0.0, 0.0
    return lo, span


@njit
def refresh_roles(degrees, labels, intra_degree, comm_size, comm_edges,
                  loyalty, loyalty_norm, density, density_norm,
                  centrality, max_intra, node_live, comm_live, bounds, with_centrality):
    """End-of-iteration recomputation of loyalty, density and centrality.

    Also stores the normalisation bounds used by the next sweep in ``bounds``.
    """
    n = len(labels)
    for i in range(n):
        d = degrees[i]
        loyalty[i] = intra_degree[i] / d if d > 0 else 0.0
    lo, span = minmax_normalize(loyalty, node_live, loyalty_norm)
    bounds[L_MIN] = lo
    bounds[L_SPAN] = span
    for c in range(n):
        s = comm_size[c]
        comm_live[c] = s > 0
        density[c] = _density(s, comm_edges[c])
    lo, span = minmax_normalize(density, comm_live, density_norm)
    bounds[D_MIN] = lo
    bounds[D_SPAN] = span
    if with_centrality:
        for c in range(n):
            max_intra[c] = 0
        for i in range(n):
            c = labels[i]
            if intra_degree[i] > max_intra[c]:
                max_intra[c] = intra_degree[i]
        for i in range(n):
            top = max_intra[labels[i]]
            centrality[i] = intra_degree[i] / top if top > 0 else 0.0
    return 3 * n
