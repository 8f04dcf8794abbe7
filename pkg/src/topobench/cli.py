"""Command-line entry point.

Subcommand groups: ``donut`` (dataset generation/verification), ``cloud``
(surface sampling), ``ph`` (persistence), ``pd`` (diagram metrics),
``align`` (vectorization + CKA), ``probe`` (linear probing), ``loss``
(set-prediction objective), ``filtr`` (decoder inference/evaluation) and
``report`` (plot-ready CSV emission).

Exit codes: 0 on success, 1 on domain errors, 2 on usage errors.  Every
file output gets a ``.meta.json`` sidecar recording the command, its
parameters and the seed.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import align as al
from . import decoder as dec
from . import donut
from . import geometry as geo
from . import metrics as met
from . import persistence as ph
from . import setpred as sp
from .errors import InvalidParameterError, TopoBenchError


def _sidecar(out_path, args, extra=None):
    payload = {"command": " ".join(sys.argv[:1] + sys.argv[1:3]),
               "params": {k: v for k, v in vars(args).items() if k != "func"}}
    if extra:
        payload.update(extra)
    Path(str(out_path) + ".meta.json").write_text(
        json.dumps(payload, sort_keys=True, indent=2, default=str) + "\n")


def _load_cloud(path):
    path = Path(path)
    if path.suffix == ".pcf":
        return geo.load_pcf(path)
    return geo.load_cloud_csv(path)


def _save_cloud(cloud, path):
    path = Path(path)
    if path.suffix == ".pcf":
        geo.save_pcf(cloud, path)
    else:
        geo.save_cloud_csv(cloud, path)


def _load_mesh(path):
    path = Path(path)
    if path.suffix == ".obj":
        return geo.load_obj(path)
    return geo.load_off(path)


# --------------------------------------------------------------------- donut

def _cmd_donut_gen(args):
    config = donut.GenerationConfig(seed=args.seed)
    manifest = donut.generate_dataset(config, args.count, out_dir=args.out,
                                      jobs=args.jobs)
    print(f"generated {manifest['count']} samples into {args.out}")
    return 0


def _cmd_donut_verify(args):
    report = donut.verify_dataset(args.directory)
    print(f"{report['passed']}/{report['total']} samples verified")
    for r in report["results"]:
        if not r["ok"]:
            print(f"  sample {r['id']}: beta0={r['beta0_measured']} "
                  f"genus={r['genus_total_measured']} manifold={r['manifold']}")
    return 0 if report["passed"] == report["total"] else 1


# --------------------------------------------------------------------- cloud

def _cmd_cloud_sample(args):
    mesh = _load_mesh(args.mesh)
    cloud = geo.sample_surface(mesh, args.n, args.seed)
    if args.normalize:
        cloud = geo.normalize_unit_sphere(cloud)
    _save_cloud(cloud, args.out)
    _sidecar(args.out, args)
    print(f"sampled {args.n} points -> {args.out}")
    return 0


def _cmd_cloud_normalize(args):
    cloud = geo.normalize_unit_sphere(_load_cloud(args.input))
    _save_cloud(cloud, args.out)
    _sidecar(args.out, args)
    return 0


# ------------------------------------------------------------------------ ph

def _cmd_ph_compute(args):
    cloud = _load_cloud(args.input)
    dims = sorted(int(d) for d in args.dims.split(","))
    max_dim = 2 if max(dims) >= 1 else 1
    filt = ph.rips_filtration(cloud, max_edge=args.max_edge, max_dim=max_dim)
    diagrams = [ph.compute_persistence(filt, q) for q in dims]
    if args.finite_only:
        diagrams = [d.finite() for d in diagrams]
    ph.save_diagram_csv(diagrams, args.out)
    _sidecar(args.out, args)
    counts = ", ".join(f"H{d.dimension}={len(d)}" for d in diagrams)
    print(f"{counts} -> {args.out}")
    return 0


def _cmd_ph_threshold(args):
    dgm = ph.load_diagram_csv(args.input, dimension=args.dim)
    out = ph.quantile_threshold(dgm, args.keep)
    ph.save_diagram_csv(out, args.out)
    _sidecar(args.out, args)
    print(f"kept {len(out)}/{len(dgm)} pairs -> {args.out}")
    return 0


def _cmd_ph_scale(args):
    root = Path(args.dataset)
    files = sorted(root.glob("*.csv"))
    if not files:
        raise InvalidParameterError(f"no diagram CSVs found in {root}")
    diagrams = [ph.load_diagram_csv(f, dimension=args.dim) for f in files]
    scaled, scale = ph.scale_dataset(diagrams)
    out_dir = Path(args.out) if args.out else root
    out_dir.mkdir(parents=True, exist_ok=True)
    for f, dgm in zip(files, scaled):
        ph.save_diagram_csv(dgm, out_dir / f.name)
    (out_dir / "scale.json").write_text(json.dumps(
        {"scale": scale, "n_diagrams": len(files)}, indent=2) + "\n")
    _sidecar(out_dir / "scale.json", args)
    print(f"scale={scale!r} applied to {len(files)} diagrams")
    return 0


# ------------------------------------------------------------------------ pd

def _cmd_pd_dist(args):
    d1 = ph.load_diagram_csv(args.a, dimension=args.dim)
    d2 = ph.load_diagram_csv(args.b, dimension=args.dim)
    fn = met.wasserstein2 if args.metric == "w2" else met.bottleneck
    print(repr(fn(d1, d2)))
    return 0


def _cmd_pd_image(args):
    dgm = ph.load_diagram_csv(args.input, dimension=args.dim)
    img = met.persistence_image(dgm, met.ImageParams(args.res, args.sigma))
    with open(args.out, "w") as fh:
        for row in img.values:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    _sidecar(args.out, args)
    return 0


def _cmd_pd_pie(args):
    pred = ph.load_diagram_csv(args.pred, dimension=args.dim)
    true = ph.load_diagram_csv(args.true, dimension=args.dim)
    print(repr(met.pie(pred, true, met.ImageParams(args.res, args.sigma))))
    return 0


# --------------------------------------------------------------------- align

def _cmd_align_cka(args):
    a = al.load_ftn(args.features).pooled()
    b = al.load_ftn(args.vectors).pooled()
    print(repr(al.linear_cka(a, b)))
    return 0


def _cmd_align_ablate(args):
    a = al.load_ftn(args.features).pooled()
    b = al.load_ftn(args.vectors).pooled()
    score = al.permutation_ablation(a, b, args.alpha, seed=args.seed,
                                    repeats=args.repeats)
    print(repr(score))
    return 0


def _cmd_align_vectorize(args):
    files = sorted(Path(args.diagrams).glob("*.csv"))
    if not files:
        raise InvalidParameterError(f"no diagram CSVs found in {args.diagrams}")
    diagrams = [ph.load_diagram_csv(f, dimension=args.dim) for f in files]
    if args.method == "topk":
        vec = al.TopKVectorizer(k=args.k).fit_transform(diagrams)
    else:
        vec = al.QuantizationVectorizer(n_centers=args.centers, seed=args.seed) \
            .fit_transform(diagrams)
    al.save_ftn(vec, args.out, metadata={"method": args.method, "files": [f.name for f in files]})
    _sidecar(args.out, args)
    print(f"{vec.shape[0]} x {vec.shape[1]} vectors -> {args.out}")
    return 0


# --------------------------------------------------------------------- probe

def _task_labels(manifest, task):
    samples = manifest["samples"]
    if task == "beta0":
        return np.array([s["beta0"] - 1 for s in samples]), 6
    return np.array([s["genus_total"] for s in samples]), 11


def _cmd_probe_train(args):
    tensor = al.load_ftn(args.features)
    manifest = donut.load_manifest(args.manifest)
    labels, n_classes = _task_labels(manifest, args.task)
    config = al.ProbeConfig(n_classes=n_classes, folds=args.folds, seed=args.seed)
    result = al.train_linear_probe(tensor, labels, config)
    for i, acc in enumerate(result["fold_accuracies"]):
        print(f"fold {i}: {acc:.4f}")
    print(f"mean accuracy: {result['mean_accuracy']:.4f}")
    return 0


# ---------------------------------------------------------------------- loss

def _load_prediction(path, logits_path=None):
    dgm = ph.load_diagram_csv(path, dimension=1)
    if logits_path:
        logits = np.array([float(line) for line in Path(logits_path).read_text().split()])
    else:
        logits = np.zeros(len(dgm))
    return dgm.pairs, logits


def _cmd_loss_eval(args):
    pred = _load_prediction(args.pred, args.logits)
    target = ph.load_diagram_csv(args.target, dimension=1)
    breakdown = sp.total_loss(pred, target.pairs, sp.LossWeights())
    print(f"recon: {breakdown.recon!r}")
    print(f"exist: {breakdown.exist!r}")
    print(f"diag:  {breakdown.diag!r}")
    print(f"total: {breakdown.total!r}")
    return 0


def _cmd_loss_gradcheck(args):
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.trials):
        n = int(rng.integers(3, 9))
        m = int(rng.integers(1, n + 1))
        births = rng.random(n)
        pairs = np.stack([births, births + rng.random(n) + 1e-3], axis=1)
        logits = rng.normal(size=n)
        target = rng.random((m, 2))
        worst = max(worst, _max_grad_error(pairs, logits, target))
    print(f"max relative gradient error over {args.trials} trials: {worst:.3e}")
    return 0 if worst < 1e-4 else 1


def _max_grad_error(pairs, logits, target, h=1e-5):
    weights = sp.LossWeights()
    assignment = sp.hungarian(sp.match_cost((pairs, logits), target, weights))
    grads = sp.loss_gradients((pairs, logits), target, weights, assignment)

    def value(p, l):
        breakdown_assignment = assignment  # fixed matching, bilevel convention
        recon = sp.loss_recon((p, l), target, breakdown_assignment)
        exist = sp.loss_exist(l, breakdown_assignment)
        diag = sp.loss_diag((p, l), breakdown_assignment)
        return (weights.mu_recon * recon + weights.mu_exist * exist
                + weights.mu_diag * diag)

    worst = 0.0
    for arr, key, col in ((pairs, "births", 0), (pairs, "deaths", 1)):
        for i in range(len(pairs)):
            p1, p2 = pairs.copy(), pairs.copy()
            p1[i, col] -= h
            p2[i, col] += h
            fd = (value(p2, logits) - value(p1, logits)) / (2 * h)
            an = grads[key][i]
            worst = max(worst, abs(fd - an) / max(abs(fd), abs(an), 1e-8))
    for i in range(len(logits)):
        l1, l2 = logits.copy(), logits.copy()
        l1[i] -= h
        l2[i] += h
        fd = (value(pairs, l2) - value(pairs, l1)) / (2 * h)
        an = grads["logits"][i]
        worst = max(worst, abs(fd - an) / max(abs(fd), abs(an), 1e-8))
    return worst


# --------------------------------------------------------------------- filtr

def _cmd_filtr_infer(args):
    weights = dec.load_weights(args.weights)
    features = al.load_ftn(args.features).data
    centers_path = args.centers or str(Path(args.features).with_suffix(".centers.ftn"))
    centers = al.load_ftn(centers_path).data
    threshold = None if args.threshold is None or args.threshold < 0 else args.threshold
    dgm = dec.predict_diagram(features, centers, weights, mode=args.mode,
                              threshold=threshold)
    ph.save_diagram_csv(dgm, args.out)
    _sidecar(args.out, args)
    print(f"{len(dgm)} predicted pairs -> {args.out}")
    return 0


def _cmd_filtr_eval(args):
    pred_files = sorted(Path(args.pred).glob("*.csv"))
    true_files = sorted(Path(args.true).glob("*.csv"))
    pred = [ph.load_diagram_csv(f, dimension=1) for f in pred_files]
    true = [ph.load_diagram_csv(f, dimension=1) for f in true_files]
    report = dec.evaluate(pred, true, met.ImageParams(args.pie_res, args.pie_sigma))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("sample,w2,bottleneck,pie\n")
            for name, row in zip((f.name for f in pred_files), report["per_sample"]):
                fh.write(f"{name},{row['w2']!r},{row['bottleneck']!r},{row['pie']!r}\n")
        _sidecar(args.out, args)
    print(f"mean W2: {report['mean_w2']!r}")
    print(f"mean bottleneck: {report['mean_bottleneck']!r}")
    print(f"mean PIE: {report['mean_pie']!r}")
    return 0


# -------------------------------------------------------------------- report

def _cmd_report_plots(args):
    if args.kind == "cka-alpha":
        a = al.load_ftn(args.features).pooled()
        b = al.load_ftn(args.vectors).pooled()
        alphas = [float(t) for t in args.alphas.split(",")]
        with open(args.out, "w") as fh:
            fh.write("alpha,mean_cka\n")
            for alpha in alphas:
                score = al.permutation_ablation(a, b, alpha, seed=args.seed,
                                                repeats=args.repeats)
                fh.write(f"{alpha!r},{score!r}\n")
    elif args.kind == "probing":
        manifest = donut.load_manifest(args.manifest)
        labels, n_classes = _task_labels(manifest, args.task)
        files = sorted(Path(args.features_dir).glob("*.ftn"))
        if not files:
            raise InvalidParameterError(f"no .ftn files in {args.features_dir}")
        with open(args.out, "w") as fh:
            fh.write("block,mean_accuracy\n")
            for i, f in enumerate(files, start=1):
                tensor = al.load_ftn(f)
                block = tensor.metadata.get("block", i)
                config = al.ProbeConfig(n_classes=n_classes, folds=args.folds,
                                        seed=args.seed)
                result = al.train_linear_probe(tensor, labels, config)
                fh.write(f"{block},{result['mean_accuracy']!r}\n")
    else:  # overlay
        pred = ph.load_diagram_csv(args.pred, dimension=args.dim)
        true = ph.load_diagram_csv(args.true, dimension=args.dim)
        with open(args.out, "w") as fh:
            fh.write("source,birth,death\n")
            for b, d in true.pairs:
                fh.write(f"true,{float(b)!r},{float(d)!r}\n")
            for b, d in pred.pairs:
                fh.write(f"pred,{float(b)!r},{float(d)!r}\n")
    _sidecar(args.out, args)
    print(f"wrote {args.out}")
    return 0


# ------------------------------------------------------------------- parsing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="topobench", description=__doc__)
    groups = parser.add_subparsers(dest="group", required=True)

    g = groups.add_parser("donut", help="benchmark dataset generation")
    sub = g.add_subparsers(dest="command", required=True)
    p = sub.add_parser("gen")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_donut_gen)
    p = sub.add_parser("verify")
    p.add_argument("directory")
    p.set_defaults(func=_cmd_donut_verify)

    g = groups.add_parser("cloud", help="surface sampling and normalization")
    sub = g.add_subparsers(dest="command", required=True)
    p = sub.add_parser("sample")
    p.add_argument("--mesh", required=True)
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_cloud_sample)
    p = sub.add_parser("normalize")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_cloud_normalize)

    g = groups.add_parser("ph", help="persistence computation")
    sub = g.add_subparsers(dest="command", required=True)
    p = sub.add_parser("compute")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--max-edge", type=float, default=2.0)
    p.add_argument("--dims", default="0,1")
    p.add_argument("--finite-only", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_ph_compute)
    p = sub.add_parser("threshold")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--keep", type=float, default=0.10)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_ph_threshold)
    p = sub.add_parser("scale")
    p.add_argument("--dataset", required=True)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_ph_scale)

    g = groups.add_parser("pd", help="diagram metrics")
    sub = g.add_subparsers(dest="command", required=True)
    p = sub.add_parser("dist")
    p.add_argument("--metric", choices=["w2", "bottleneck"], required=True)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=_cmd_pd_dist)
    p = sub.add_parser("image")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--res", type=int, default=50)
    p.add_argument("--sigma", type=float, default=0.05)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_pd_image)
    p = sub.add_parser("pie")
    p.add_argument("pred")
    p.add_argument("true")
    p.add_argument("--res", type=int, default=50)
    p.add_argument("--sigma", type=float, default=0.05)
    p.add_argument("--dim", type=int, default=None)
    p.set_defaults(func=_cmd_pd_pie)

    g = groups.add_parser("align", help="vectorizations and CKA")
    sub = g.add_subparsers(dest="command", required=True)
    p = sub.add_parser("cka")
    p.add_argument("--features", required=True)
    p.add_argument("--vectors", required=True)
    p.set_defaults(func=_cmd_align_cka)
    p = sub.add_parser("ablate")
    p.add_argument("--features", required=True)
    p.add_argument("--vectors", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=3)
    p.set_defaults(func=_cmd_align_ablate)
    p = sub.add_parser("vectorize")
    p.add_argument("--diagrams", required=True)
    p.add_argument("--method", choices=["topk", "quantize"], default="topk")
    p.add_argument("--k", type=int, default=128)
    p.add_argument("--centers", type=int, default=16)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_align_vectorize)

    g = groups.add_parser("probe", help="linear probing of features")
    sub = g.add_subparsers(dest="command", required=True)
    p = sub.add_parser("train")
    p.add_argument("--features", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--task", choices=["beta0", "genus"], required=True)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_probe_train)

    g = groups.add_parser("loss", help="set-prediction objective")
    sub = g.add_subparsers(dest="command", required=True)
    p = sub.add_parser("eval")
    p.add_argument("--pred", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--logits", default=None)
    p.add_argument("--weights", default="default", choices=["default"])
    p.set_defaults(func=_cmd_loss_eval)
    p = sub.add_parser("gradcheck")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_loss_gradcheck)

    g = groups.add_parser("filtr", help="decoder inference and evaluation")
    sub = g.add_subparsers(dest="command", required=True)
    p = sub.add_parser("infer")
    p.add_argument("--features", required=True)
    p.add_argument("--centers", default=None)
    p.add_argument("--weights", required=True)
    p.add_argument("--mode", choices=["last", "combined"], default="last")
    p.add_argument("--threshold", type=float, default=0.5,
                   help="negative value keeps all pairs")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_filtr_infer)
    p = sub.add_parser("eval")
    p.add_argument("--pred", required=True)
    p.add_argument("--true", required=True)
    p.add_argument("--pie-res", type=int, default=50)
    p.add_argument("--pie-sigma", type=float, default=0.05)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_filtr_eval)

    g = groups.add_parser("report", help="plot-ready CSV emission")
    sub = g.add_subparsers(dest="command", required=True)
    p = sub.add_parser("plots")
    p.add_argument("--kind", choices=["cka-alpha", "probing", "overlay"], required=True)
    p.add_argument("--features", default=None)
    p.add_argument("--vectors", default=None)
    p.add_argument("--alphas", default="0,0.25,0.5,0.75,1.0")
    p.add_argument("--features-dir", default=None)
    p.add_argument("--manifest", default=None)
    p.add_argument("--task", choices=["beta0", "genus"], default="beta0")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--pred", default=None)
    p.add_argument("--true", default=None)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_report_plots)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TopoBenchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
