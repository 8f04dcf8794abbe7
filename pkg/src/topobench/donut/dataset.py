"""Dataset generation: label sampling, per-sample assembly with retries,
verification, and a deterministic JSON manifest.

Samples are independent given their per-index substreams, so generation
parallelizes over a process pool without affecting the output.
"""

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path

from ..errors import AssemblyFailedError, InvalidParameterError
from ..geometry.mesh import save_off
from ..rng import substream
from .assemble import assemble_sample, verify_labels
from .labels import GenerationConfig, LabelPair, choose_decomposition, sample_labels

MANIFEST_NAME = "manifest.json"


def _config_dict(config: GenerationConfig) -> dict:
    out = {}
    for key, value in asdict(config).items():
        if isinstance(value, tuple):
            out[key] = list(value)
        else:
            out[key] = value
    return out


def _generate_one(args):
    """Worker: build and verify one sample, retrying with fresh substreams."""
    index, beta0, genus_total, config, out_dir = args
    label = LabelPair(beta0, genus_total)
    last_error = "verification mismatch"
    for attempt in range(config.max_sample_retries):
        rng = substream(config.seed, "sample", index, attempt)
        try:
            decomposition = choose_decomposition(label, config, rng)
            meshes, components = assemble_sample(label, decomposition, config, rng)
        except AssemblyFailedError as exc:
            last_error = str(exc)
            continue
        report = verify_labels(meshes)
        if not report.matches(label):
            last_error = (f"measured (beta0={report.beta0_measured}, "
                          f"g={report.genus_total_measured}, manifold={report.manifold})")
            continue
        paths = []
        if out_dir is not None:
            mesh_dir = Path(out_dir) / "meshes"
            mesh_dir.mkdir(parents=True, exist_ok=True)
            for c, mesh in enumerate(meshes):
                rel = f"meshes/s{index:06d}_c{c}.off"
                save_off(mesh, Path(out_dir) / rel)
                paths.append(rel)
        entry = {
            "id": index,
            "beta0": label.beta0,
            "genus_total": label.genus_total,
            "seed": config.seed,
            "attempt": attempt,
            "decomposition": list(decomposition.counts),
            "components": components,
            "mesh_files": paths,
            "verification": {
                "beta0_measured": report.beta0_measured,
                "genus_total_measured": report.genus_total_measured,
                "manifold": report.manifold,
            },
        }
        return entry
    raise AssemblyFailedError(
        f"sample {index} failed after {config.max_sample_retries} retries: {last_error}")


def generate_dataset(config: GenerationConfig, count: int, out_dir=None,
                     jobs: int = 1) -> dict:
    """Generate ``count`` verified samples and return the dataset manifest.

    ``count`` must be divisible by the number of component-count values so
    label balance is exact.  When ``out_dir`` is given, component meshes
    are written as OFF files and the manifest as JSON.
    """
    if count < 1:
        raise InvalidParameterError(f"count must be >= 1, got {count}")
    n_beta = config.beta0_max - config.beta0_min + 1
    if count % n_beta != 0:
        raise InvalidParameterError(
            f"count must be divisible by {n_beta} to keep labels balanced")
    labels = sample_labels(config, k_replicates=count // n_beta)
    tasks = [(i, lab.beta0, lab.genus_total, config, out_dir)
             for i, lab in enumerate(labels)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(_generate_one, tasks, chunksize=4))
    else:
        entries = [_generate_one(t) for t in tasks]
    manifest = {
        "format": "topobench-dataset",
        "version": 1,
        "seed": config.seed,
        "config": _config_dict(config),
        "count": count,
        "samples": entries,
    }
    if out_dir is not None:
        write_manifest(manifest, Path(out_dir) / MANIFEST_NAME)
    return manifest


def write_manifest(manifest: dict, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")


def load_manifest(path) -> dict:
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_NAME
    return json.loads(path.read_text())


def verify_dataset(dataset_dir) -> dict:
    """Re-verify every sample of a written dataset from its mesh files."""
    from ..geometry.mesh import load_off

    root = Path(dataset_dir)
    manifest = load_manifest(root)
    results = []
    for entry in manifest["samples"]:
        meshes = [load_off(root / rel) for rel in entry["mesh_files"]]
        report = verify_labels(meshes)
        ok = (report.manifold
              and report.beta0_measured == entry["beta0"]
              and report.genus_total_measured == entry["genus_total"])
        results.append({"id": entry["id"], "ok": ok,
                        "beta0_measured": report.beta0_measured,
                        "genus_total_measured": report.genus_total_measured,
                        "manifold": report.manifold})
    n_ok = sum(r["ok"] for r in results)
    return {"total": len(results), "passed": n_ok, "results": results}
