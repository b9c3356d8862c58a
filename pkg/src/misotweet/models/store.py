"""Versioned structured-text persistence for trained models.

Layout (tab-separated key/value lines, LF endings, UTF-8):

    misotweet-model v1
    engine      logreg | gbdt | ovr
    fingerprint <hex> | -
    config      key=value;key=value;...
    ...engine-specific body...
    end

Logreg body:    dim, bias, weights (space-separated reprs).
GBDT body:      trees <count>, then per tree ``tree <i> <n_nodes>`` followed
                by ``node split <feature> <threshold> <left> <right>`` or
                ``node leaf <value>`` lines.
OVR body:       classes line, subengine line, then one ``submodel <class>``
                section per class holding that engine's config+body.

Floats are written with ``repr`` so loading reproduces the exact bits;
saving, loading, and predicting again is identity.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..errors import EngineTypeError, ModelFormatError
from .gbdt import GBDTConfig, GBDTModel, Tree, TreeNode
from .linear import LinearModel, LRConfig
from .multiclass import MulticlassModel

MAGIC = "misotweet-model"
VERSION = "v1"

Model = LinearModel | GBDTModel | MulticlassModel


class _LineReader:
    """Iterates decoded lines while tracking the byte offset of each."""

    def __init__(self, data: bytes, path: Path):
        self.data = data
        self.pos = 0
        self.path = path

    def fail(self, message: str, offset: int | None = None):
        raise ModelFormatError(
            f"{self.path}: {message}", byte_offset=self.pos if offset is None else offset
        )

    def next_line(self, expect: str | None = None) -> str:
        if self.pos >= len(self.data):
            self.fail("unexpected end of file", offset=len(self.data))
        start = self.pos
        nl = self.data.find(b"\n", start)
        if nl < 0:
            self.fail("unterminated line (truncated file?)", offset=start)
        raw = self.data[start:nl]
        self.pos = nl + 1
        try:
            line = raw.decode("utf-8")
        except UnicodeDecodeError:
            self.fail("undecodable bytes", offset=start)
        if expect is not None:
            key = line.split("\t", 1)[0]
            if key != expect:
                self.fail(f"expected a {expect!r} line, got {line!r}", offset=start)
        return line


def _fmt_config(cfg) -> str:
    pairs = []
    for name, value in vars(cfg).items():
        pairs.append(f"{name}={value!r}" if isinstance(value, float) else f"{name}={value}")
    return ";".join(pairs)


def _parse_pairs(text: str, reader: _LineReader) -> dict[str, str]:
    out = {}
    for item in text.split(";"):
        key, sep, value = item.partition("=")
        if not sep:
            reader.fail(f"malformed config entry {item!r}")
        out[key] = value
    return out


def _parse_bool(value: str, reader: _LineReader) -> bool:
    if value not in ("True", "False"):
        reader.fail(f"expected True/False, got {value!r}")
    return value == "True"


def _value_of(line: str, reader: _LineReader) -> str:
    parts = line.split("\t")
    if len(parts) != 2:
        reader.fail(f"expected 'key\\tvalue', got {line!r}")
    return parts[1]


def _write_logreg_body(fh, model: LinearModel) -> None:
    fh.write(f"config\t{_fmt_config(model.config)}\n")
    fh.write(f"dim\t{model.weights.shape[0]}\n")
    fh.write(f"bias\t{model.bias!r}\n")
    fh.write("weights\t" + " ".join(repr(float(w)) for w in model.weights) + "\n")


def _read_logreg_body(reader: _LineReader, fingerprint: str) -> LinearModel:
    pairs = _parse_pairs(_value_of(reader.next_line("config"), reader), reader)
    try:
        config = LRConfig(
            C=float(pairs["C"]),
            max_iterations=int(pairs["max_iterations"]),
            tolerance=float(pairs["tolerance"]),
            fit_intercept=_parse_bool(pairs["fit_intercept"], reader),
        )
    except KeyError as err:
        reader.fail(f"missing config field {err}")
    dim_line = _value_of(reader.next_line("dim"), reader)
    bias = float(_value_of(reader.next_line("bias"), reader))
    weights_raw = _value_of(reader.next_line("weights"), reader)
    weights = np.array([float(v) for v in weights_raw.split()] if weights_raw else [])
    if weights.shape[0] != int(dim_line):
        reader.fail(f"dim says {dim_line} weights, found {weights.shape[0]}")
    return LinearModel(weights=weights, bias=bias, fingerprint=fingerprint, config=config)


def _write_gbdt_body(fh, model: GBDTModel) -> None:
    fh.write(f"config\t{_fmt_config(model.config)}\n")
    fh.write(f"trees\t{len(model.trees)}\n")
    for i, tree in enumerate(model.trees):
        fh.write(f"tree\t{i}\t{len(tree)}\n")
        for node in tree:
            if node.is_leaf:
                fh.write(f"node\tleaf\t{node.leaf_value!r}\n")
            else:
                fh.write(
                    f"node\tsplit\t{node.feature}\t{node.threshold!r}"
                    f"\t{node.left}\t{node.right}\n"
                )


def _read_gbdt_body(reader: _LineReader, fingerprint: str) -> GBDTModel:
    pairs = _parse_pairs(_value_of(reader.next_line("config"), reader), reader)
    try:
        config = GBDTConfig(
            objective=pairs["objective"],
            scale_pos_weight=float(pairs["scale_pos_weight"]),
            reg_lambda=float(pairs["reg_lambda"]),
            eta=float(pairs["eta"]),
            max_depth=int(pairs["max_depth"]),
            n_trees=int(pairs["n_trees"]),
            min_child_hessian=float(pairs["min_child_hessian"]),
            base_score=float(pairs["base_score"]),
        )
    except KeyError as err:
        reader.fail(f"missing config field {err}")
    n_trees = int(_value_of(reader.next_line("trees"), reader))
    trees: list[Tree] = []
    for i in range(n_trees):
        head = reader.next_line("tree").split("\t")
        if len(head) != 3 or head[1] != str(i):
            reader.fail(f"expected 'tree\\t{i}\\t<nodes>', got {head!r}")
        nodes: list[TreeNode] = []
        for _ in range(int(head[2])):
            parts = reader.next_line("node").split("\t")
            if parts[1] == "leaf" and len(parts) == 3:
                nodes.append(TreeNode(leaf_value=float(parts[2])))
            elif parts[1] == "split" and len(parts) == 6:
                nodes.append(
                    TreeNode(
                        feature=int(parts[2]),
                        threshold=float(parts[3]),
                        left=int(parts[4]),
                        right=int(parts[5]),
                    )
                )
            else:
                reader.fail(f"malformed node line {parts!r}")
        trees.append(tuple(nodes))
    return GBDTModel(trees=trees, config=config, fingerprint=fingerprint)


def save_model(model: Model, path: str | Path) -> None:
    """Write any trained model in the versioned text format."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{MAGIC} {VERSION}\n")
        fingerprint = model.fingerprint or "-"
        if isinstance(model, LinearModel):
            fh.write(f"engine\tlogreg\nfingerprint\t{fingerprint}\n")
            _write_logreg_body(fh, model)
        elif isinstance(model, GBDTModel):
            fh.write(f"engine\tgbdt\nfingerprint\t{fingerprint}\n")
            _write_gbdt_body(fh, model)
        elif isinstance(model, MulticlassModel):
            fh.write(f"engine\tovr\nfingerprint\t{fingerprint}\n")
            fh.write("classes\t" + "\t".join(model.classes) + "\n")
            fh.write(f"subengine\t{model.engine}\n")
            writer = _write_logreg_body if model.engine == "logreg" else _write_gbdt_body
            for cls, sub in zip(model.classes, model.submodels):
                fh.write(f"submodel\t{cls}\n")
                writer(fh, sub)
        else:
            raise EngineTypeError(f"cannot save object of type {type(model).__name__}")
        fh.write("end\n")


def load_model(path: str | Path) -> Model:
    """Parse a model file; the concrete type follows the engine line."""
    path = Path(path)
    if not path.is_file():
        raise ModelFormatError(f"model file not found: {path}")
    reader = _LineReader(path.read_bytes(), path)
    header = reader.next_line()
    if not header.startswith(MAGIC):
        reader.fail(f"not a {MAGIC} file", offset=0)
    if header != f"{MAGIC} {VERSION}":
        reader.fail(f"unsupported format version {header[len(MAGIC) + 1:]!r}", offset=0)
    engine = _value_of(reader.next_line("engine"), reader)
    fingerprint = _value_of(reader.next_line("fingerprint"), reader)
    if fingerprint == "-":
        fingerprint = ""
    if engine == "logreg":
        model: Model = _read_logreg_body(reader, fingerprint)
    elif engine == "gbdt":
        model = _read_gbdt_body(reader, fingerprint)
    elif engine == "ovr":
        classes = tuple(reader.next_line("classes").split("\t")[1:])
        if len(classes) < 2:
            reader.fail("ovr model needs at least 2 classes")
        subengine = _value_of(reader.next_line("subengine"), reader)
        if subengine not in ("logreg", "gbdt"):
            reader.fail(f"unknown subengine {subengine!r}")
        read_body = _read_logreg_body if subengine == "logreg" else _read_gbdt_body
        submodels = []
        for cls in classes:
            tag = _value_of(reader.next_line("submodel"), reader)
            if tag != cls:
                reader.fail(f"expected submodel {cls!r}, got {tag!r}")
            submodels.append(read_body(reader, fingerprint))
        model = MulticlassModel(
            classes=classes,
            submodels=tuple(submodels),
            engine=subengine,
            fingerprint=fingerprint,
        )
    else:
        reader.fail(f"unknown engine {engine!r}")
    reader.next_line("end")
    return model


def load_linear_model(path: str | Path) -> LinearModel:
    model = load_model(path)
    if not isinstance(model, LinearModel):
        raise EngineTypeError(f"{path}: expected a logreg model, found {_engine_name(model)}")
    return model


def load_gbdt_model(path: str | Path) -> GBDTModel:
    model = load_model(path)
    if not isinstance(model, GBDTModel):
        raise EngineTypeError(f"{path}: expected a gbdt model, found {_engine_name(model)}")
    return model


def load_multiclass_model(path: str | Path) -> MulticlassModel:
    model = load_model(path)
    if not isinstance(model, MulticlassModel):
        raise EngineTypeError(f"{path}: expected an ovr model, found {_engine_name(model)}")
    return model


def _engine_name(model: Model) -> str:
    return {LinearModel: "logreg", GBDTModel: "gbdt", MulticlassModel: "ovr"}[type(model)]
