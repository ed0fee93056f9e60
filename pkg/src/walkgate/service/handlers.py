"""Pure request-to-response handlers shared by the HTTP app and the CLI."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..design import default_tables, synthesize_geometry
from ..errors import InputError
from ..gate import (
    LOGICAL_STATES,
    QubitStatePrep,
    encoding_scores,
    entangled_output,
    fidelity,
    find_encoding,
    logical_phases,
    logical_transfer_matrix,
    sample_counts,
)
from ..interference import (
    SourceModel,
    TwoPhotonInput,
    hom_scan,
    mutual_coherence,
    two_photon_distribution,
    unordered_pairs,
)
from ..walk import build_hamiltonian, cnot_hamiltonian_time, trajectory, unitary
from . import models


def _gate_unitary():
    return unitary(cnot_hamiltonian_time(), 1.0)


def handle_truth_table(req: models.TruthTableRequest) -> models.TruthTableResponse:
    u = _gate_unitary()
    enc = find_encoding(u)
    raw = logical_transfer_matrix(u, enc, req.x)
    matrix = raw.probs
    if req.normalize:
        matrix = matrix / matrix.sum(axis=1, keepdims=True)
    pattern_mass, _ = encoding_scores(u, enc)
    return models.TruthTableResponse(
        x=req.x,
        normalized=req.normalize,
        states=list(LOGICAL_STATES),
        matrix=matrix.tolist(),
        success=raw.probs.sum(axis=1).tolist(),
        phases_rad=logical_phases(u, enc).tolist(),
        pattern_mass=pattern_mass,
        encoding=models.EncodingModel(
            c0=enc.c0 + 1, c1=enc.c1 + 1, t0=enc.t0 + 1, t1=enc.t1 + 1,
            aux=[a + 1 for a in enc.aux],
        ),
    )


def handle_evolve(req: models.EvolveRequest) -> models.TableResponse:
    ht = cnot_hamiltonian_time()
    if len(req.input_modes) == 1:
        mode = req.input_modes[0] - 1
        psi = np.zeros(6, dtype=complex)
        psi[mode] = 1.0
        traj = trajectory(ht, 1.0, psi, req.n_steps)
        columns = ["z"] + [f"i_{k}" for k in range(1, 7)]
        rows = [
            [float(z)] + traj.intensities[i].tolist()
            for i, z in enumerate(traj.z_grid)
        ]
        return models.TableResponse(columns=columns, rows=rows)

    a, b = (m - 1 for m in req.input_modes)
    pairs = unordered_pairs(6)
    columns = ["z"] + [f"p_{k + 1}_{l + 1}" for k, l in pairs]
    rows = []
    for z in np.linspace(0.0, 1.0, req.n_steps):
        dist = two_photon_distribution(
            unitary(ht, float(z)), TwoPhotonInput(a, b, overlap=req.x)
        )
        rows.append([float(z)] + [dist.probs[p] for p in pairs])
    return models.TableResponse(columns=columns, rows=rows)


def handle_hom_scan(req: models.HomScanRequest) -> models.TableResponse:
    u = _gate_unitary()
    source = SourceModel(
        center_wavelength_nm=req.wavelength_nm,
        bandwidth_fwhm_nm=req.bandwidth_nm,
        max_visibility=req.visibility,
    )
    taus_ps = np.linspace(req.tau_min_ps, req.tau_max_ps, req.n_steps)
    a, b = (m - 1 for m in req.input_modes)
    scans = hom_scan(u, a, b, taus_ps * 1e-12, source)
    pairs = unordered_pairs(6)
    columns = ["tau_ps", "overlap"] + [f"p_{k + 1}_{l + 1}" for k, l in pairs]
    rows = []
    for tau_ps, dist in zip(taus_ps, scans):
        x = mutual_coherence(float(tau_ps) * 1e-12, source)
        rows.append([float(tau_ps), x] + [dist.probs[p] for p in pairs])
    return models.TableResponse(columns=columns, rows=rows)


def handle_bell(req: models.BellRequest) -> models.BellResponse:
    prep = QubitStatePrep(
        coupler_reflectivity=req.eta, phase=req.phi, target_state=req.target_state
    )
    out = entangled_output(cnot_hamiltonian_time(), prep, req.x)
    resp = models.BellResponse(
        x=req.x,
        eta=req.eta,
        phi=req.phi,
        target_state=req.target_state,
        states=list(LOGICAL_STATES),
        probs=out.probs.tolist(),
        leakage=out.leakage,
        raw=out.raw.tolist(),
    )
    if req.counts is not None:
        sample = sample_counts(out.probs, req.counts, req.seed)
        resp.counts = sample.counts.tolist()
        resp.errors = sample.errors.tolist()
        resp.total = sample.total
        resp.seed = sample.seed
    return resp


def _load_target(path: str):
    p = Path(path)
    if not p.is_file():
        raise InputError(f"target file not found: {p}")
    try:
        payload = json.loads(p.read_text())
        return build_hamiltonian(payload["beta"], payload["kappa"])
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(
            f"target file must be JSON with 'beta' and 'kappa' arrays: {exc}"
        ) from exc


def handle_design(req: models.DesignRequest) -> models.DesignResponse:
    if req.target_file is not None:
        target = _load_target(req.target_file)
    elif req.builtin == "cnot":
        target = cnot_hamiltonian_time()
    else:
        raise InputError(f"unknown builtin target {req.builtin!r}; available: cnot")
    beta_table, kappa_table = default_tables(req.table_dir)
    geom = synthesize_geometry(
        target,
        length_um=req.length_um,
        beta_table=beta_table,
        kappa_table=kappa_table,
        reference_mode=req.reference_mode - 1,
        reference_width_um=req.reference_width_um,
    )
    return models.DesignResponse(
        length_um=geom.length_um,
        reference_mode=geom.reference_mode + 1,
        reference_width_um=req.reference_width_um,
        decouple_gap_um=geom.decouple_gap_um,
        widths_um=geom.widths_um.tolist(),
        gaps_um=geom.gaps_um.tolist(),
    )


def handle_fidelity(req: models.FidelityRequest) -> models.FidelityResponse:
    return models.FidelityResponse(fidelity=fidelity(np.array(req.g), np.array(req.g_prime)))


def handle_sample(req: models.SampleRequest) -> models.SampleResponse:
    sample = sample_counts(np.array(req.probs, dtype=float), req.total, req.seed)
    return models.SampleResponse(
        counts=sample.counts.tolist(),
        errors=sample.errors.tolist(),
        total=sample.total,
        seed=sample.seed,
    )
