#!/usr/bin/env python3
"""Regenerates the tiny ONNX graphs used by the local-backend tests.

scorer/   p_entail = sigmoid(overlap(premise_bow, hypothesis_bow) . w + b)
embedder/ embedding = text_bow @ W
"""
import json
import pathlib

import numpy as np
import onnx
from onnx import TensorProto, helper, numpy_helper

HERE = pathlib.Path(__file__).resolve().parent
VOCAB = ["<unk>", "vote", "voter", "protest", "manifester", "violence", "share",
         "partager", "every", "counts", "chaque", "compte", "text", "about",
         "something", "else", "the", "message", "readers", "encourages"]
DIM = 4


def write_tokenizer(dir_):
    tok = {"vocab": {w: i for i, w in enumerate(VOCAB)}, "unk_id": 0, "lowercase": True}
    (dir_ / "tokenizer.json").write_text(json.dumps(tok, indent=2, sort_keys=True) + "\n")


def save(model, path):
    model.ir_version = 7
    onnx.checker.check_model(model)
    onnx.save(model, str(path))


def scorer():
    d = HERE / "scorer"
    d.mkdir(exist_ok=True)
    v = len(VOCAB)
    w = np.full((v, 1), 0.8, dtype=np.float32)
    w[0, 0] = 0.0
    b = np.array([-1.0], dtype=np.float32)
    nodes = [
        helper.make_node("Mul", ["premise_bow", "hypothesis_bow"], ["overlap"]),
        helper.make_node("MatMul", ["overlap", "w"], ["logit_raw"]),
        helper.make_node("Add", ["logit_raw", "b"], ["logit"]),
        helper.make_node("Sigmoid", ["logit"], ["p_entail"]),
    ]
    graph = helper.make_graph(
        nodes, "agenda_scorer",
        [helper.make_tensor_value_info("premise_bow", TensorProto.FLOAT, [1, v]),
         helper.make_tensor_value_info("hypothesis_bow", TensorProto.FLOAT, [1, v])],
        [helper.make_tensor_value_info("p_entail", TensorProto.FLOAT, [1, 1])],
        [numpy_helper.from_array(w, "w"), numpy_helper.from_array(b, "b")])
    save(helper.make_model(graph, opset_imports=[helper.make_opsetid("", 11)]), d / "model.onnx")
    write_tokenizer(d)
    manifest = {
        "task": "score",
        "graph": "model.onnx",
        "tokenizer": "tokenizer.json",
        "encoding": "bag_of_words",
        "inputs": {"premise": "premise_bow", "hypothesis": "hypothesis_bow"},
        "output": {"name": "p_entail", "role": "probability"},
    }
    (d / "backend.json").write_text(json.dumps(manifest, indent=2) + "\n")


def embedder():
    d = HERE / "embedder"
    d.mkdir(exist_ok=True)
    v = len(VOCAB)
    rng = np.random.default_rng(7)
    w = rng.normal(size=(v, DIM)).astype(np.float32)
    nodes = [helper.make_node("MatMul", ["text_bow", "w"], ["embedding"])]
    graph = helper.make_graph(
        nodes, "agenda_embedder",
        [helper.make_tensor_value_info("text_bow", TensorProto.FLOAT, [1, v])],
        [helper.make_tensor_value_info("embedding", TensorProto.FLOAT, [1, DIM])],
        [numpy_helper.from_array(w, "w")])
    save(helper.make_model(graph, opset_imports=[helper.make_opsetid("", 11)]), d / "model.onnx")
    write_tokenizer(d)
    manifest = {
        "task": "embed",
        "graph": "model.onnx",
        "tokenizer": "tokenizer.json",
        "encoding": "bag_of_words",
        "inputs": {"text": "text_bow"},
        "output": {"name": "embedding", "role": "embedding"},
    }
    (d / "backend.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    scorer()
    embedder()
