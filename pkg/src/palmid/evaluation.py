"""Experiment harness: repeated random splits and train-count sweeps.

Each repeat draws its own per-subject train/test split (split seed = master
seed + repeat index, so individual repeats are reproducible in isolation),
enrolls a gallery from the training samples, and identifies every test probe
three ways: line features alone, wavelet features alone, and the hybrid
decision. Feature vectors are extracted once per corpus and shared across
repeats and train counts; only the averaging and distances change.

Reports serialize to a stable JSON document (sorted keys), so identical
inputs produce byte-identical files.
"""

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from . import dataset, fusion
from .config import PipelineConfig
from .errors import ParameterError
from .gallery import Gallery, GeometryFingerprint, average_features
from .palmline import line_feature
from .wavelet import wavelet_feature

METHODS = ("line", "wavelet", "hybrid")


@dataclass
class RepeatResult:
    repeat: int
    split_seed: object
    n_test: int
    correct: dict  # method -> count

    def accuracy(self, method: str) -> float:
        return self.correct[method] / self.n_test if self.n_test else 0.0

    def to_dict(self) -> dict:
        out = {"repeat": self.repeat, "split_seed": self.split_seed, "n_test": self.n_test}
        for method in METHODS:
            out[method] = {
                "correct": self.correct[method],
                "misidentified": self.n_test - self.correct[method],
                "accuracy": self.accuracy(method),
            }
        return out


@dataclass
class ExperimentReport:
    n_train: int
    repeats: int
    seed: object
    config: PipelineConfig
    corpus_info: dict
    per_repeat: list
    scores_csv: object = None
    _summary: dict = field(default=None, repr=False)

    @property
    def n_test_total(self) -> int:
        return sum(r.n_test for r in self.per_repeat)

    def mean_accuracy(self, method: str) -> float:
        return float(np.mean([r.accuracy(method) for r in self.per_repeat]))

    def std_accuracy(self, method: str) -> float:
        return float(np.std([r.accuracy(method) for r in self.per_repeat]))

    def summary(self) -> dict:
        out = {"n_test_total": self.n_test_total}
        for method in METHODS:
            out[method] = {
                "mean_accuracy": self.mean_accuracy(method),
                "std_accuracy": self.std_accuracy(method),
                "misidentified": sum(r.n_test - r.correct[method] for r in self.per_repeat),
            }
        return out

    def to_dict(self) -> dict:
        return {
            "schema": "palmid-report-v1",
            "config": self.config.to_dict(),
            "corpus": self.corpus_info,
            "n_train": self.n_train,
            "repeats": self.repeats,
            "seed": self.seed,
            "per_repeat": [r.to_dict() for r in self.per_repeat],
            "summary": self.summary(),
            "scores_csv": str(self.scores_csv) if self.scores_csv else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def extract_corpus_features(corpus: dataset.Corpus, config: PipelineConfig) -> dict:
    """(subject_id, sample_index) -> (line vector, wavelet vector) for every sample."""
    features = {}
    for sample in corpus.iter_samples():
        features[(sample.subject_id, sample.sample_index)] = (
            line_feature(sample, config.line).concatenated,
            wavelet_feature(sample, config.wavelet).concatenated,
        )
    return features


def _corpus_info(corpus: dataset.Corpus) -> dict:
    return {
        "side": corpus.side,
        "subjects": len(corpus.subject_ids),
        "samples_per_subject": {s: len(corpus.samples[s]) for s in corpus.subject_ids},
    }


def _enroll(train: dataset.Corpus, features: dict,
            fingerprint: GeometryFingerprint) -> Gallery:
    templates = []
    for subject in train.subject_ids:
        samples = train.samples[subject]
        line_vecs = [features[(subject, s.sample_index)][0] for s in samples]
        wav_vecs = [features[(subject, s.sample_index)][1] for s in samples]
        templates.append(average_features(subject, line_vecs, wav_vecs,
                                          len(samples), fingerprint))
    return Gallery(templates=tuple(templates), fingerprint=fingerprint)


def run_experiment(corpus: dataset.Corpus, n_train: int, repeats: int, seed,
                   config: PipelineConfig = PipelineConfig(), features: dict = None,
                   scores_csv=None) -> ExperimentReport:
    """Repeated split/enroll/identify experiment over one corpus."""
    if repeats < 1:
        raise ParameterError(f"repeats must be >= 1, got {repeats}")
    if features is None:
        features = extract_corpus_features(corpus, config)
    fingerprint = GeometryFingerprint(side=corpus.side, line=config.line,
                                      wavelet=config.wavelet)
    csv_rows = []
    per_repeat = []
    for r in range(repeats):
        split_seed = None if seed is None else seed + r
        train, test = dataset.split(corpus, n_train, split_seed)
        gallery = _enroll(train, features, fingerprint)
        correct = {m: 0 for m in METHODS}
        n_test = 0
        for probe in test.iter_samples():
            line_vec, wav_vec = features[(probe.subject_id, probe.sample_index)]
            d_line, d_wav = fusion.raw_distances((line_vec, wav_vec), gallery,
                                                 config.distance_mode)
            line_pred = gallery.class_ids[int(np.argmin(fusion.normalize(d_line)))]
            wav_pred = gallery.class_ids[int(np.argmin(fusion.normalize(d_wav)))]
            hybrid_pred, table = fusion.decide(d_line, d_wav, gallery.class_ids)
            n_test += 1
            correct["line"] += line_pred == probe.subject_id
            correct["wavelet"] += wav_pred == probe.subject_id
            correct["hybrid"] += hybrid_pred == probe.subject_id
            if scores_csv is not None:
                csv_rows.append([r, probe.subject_id, probe.sample_index,
                                 line_pred, wav_pred, hybrid_pred,
                                 repr(table.rows[table.decided_index].df),
                                 repr(table.margin)])
        per_repeat.append(RepeatResult(repeat=r, split_seed=split_seed,
                                       n_test=n_test, correct=correct))

    if scores_csv is not None:
        with open(scores_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["repeat", "subject_id", "sample_index",
                             "line_pred", "wavelet_pred", "hybrid_pred",
                             "hybrid_df", "hybrid_margin"])
            writer.writerows(csv_rows)

    return ExperimentReport(n_train=n_train, repeats=repeats, seed=seed, config=config,
                            corpus_info=_corpus_info(corpus), per_repeat=per_repeat,
                            scores_csv=scores_csv)


def sweep_train_count(corpus: dataset.Corpus, train_counts, repeats: int, seed,
                      config: PipelineConfig = PipelineConfig()) -> list:
    """run_experiment once per train count, sharing one feature extraction pass."""
    train_counts = list(train_counts)
    if not train_counts:
        raise ParameterError("train_counts must not be empty")
    features = extract_corpus_features(corpus, config)
    return [run_experiment(corpus, n, repeats, seed, config, features=features)
            for n in train_counts]


def format_report_table(report: ExperimentReport) -> str:
    lines = [f"n_train={report.n_train}  repeats={report.repeats}  seed={report.seed}",
             f"{'repeat':>6}  {'n_test':>6}  {'line':>8}  {'wavelet':>8}  {'hybrid':>8}"]
    for r in report.per_repeat:
        lines.append(f"{r.repeat:>6}  {r.n_test:>6}  {r.accuracy('line'):>8.4f}  "
                     f"{r.accuracy('wavelet'):>8.4f}  {r.accuracy('hybrid'):>8.4f}")
    lines.append(f"{'mean':>6}  {report.n_test_total:>6}  {report.mean_accuracy('line'):>8.4f}  "
                 f"{report.mean_accuracy('wavelet'):>8.4f}  {report.mean_accuracy('hybrid'):>8.4f}")
    return "\n".join(lines)


def format_sweep_table(reports) -> str:
    lines = [f"{'train':>5}  {'test/repeat':>11}  {'line':>8}  {'wavelet':>8}  {'hybrid':>8}"]
    for report in reports:
        per_repeat_test = report.n_test_total // report.repeats
        lines.append(f"{report.n_train:>5}  {per_repeat_test:>11}  "
                     f"{report.mean_accuracy('line'):>8.4f}  "
                     f"{report.mean_accuracy('wavelet'):>8.4f}  "
                     f"{report.mean_accuracy('hybrid'):>8.4f}")
    return "\n".join(lines)


def sweep_to_json(reports) -> str:
    doc = {"schema": "palmid-sweep-v1",
           "reports": [r.to_dict() for r in reports]}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
