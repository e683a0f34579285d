#!/usr/bin/env python3
"""Regenerates the tiny ONNX fixtures used by the backbone tests.

Writes the ONNX protobuf wire format directly so the script has no
dependencies beyond numpy:

  tiny_backbone.onnx     224x224x3 input -> GlobalAveragePool -> Flatten
                         -> Gemm -> 16-d output
  tiny_wrong_shape.onnx  64x64x3 input -> Flatten -> Gemm; rejects
                         224x224x3 blobs at inference time
"""

import struct

import numpy as np


def varint(n: int) -> bytes:
    out = b""
    while True:
        b = n & 0x7F
        n >>= 7
        if n:
            out += bytes([b | 0x80])
        else:
            return out + bytes([b])


def tag(field: int, wire: int) -> bytes:
    return varint((field << 3) | wire)


def field_varint(field: int, value: int) -> bytes:
    return tag(field, 0) + varint(value)


def field_bytes(field: int, payload: bytes) -> bytes:
    return tag(field, 2) + varint(len(payload)) + payload


def field_str(field: int, s: str) -> bytes:
    return field_bytes(field, s.encode())


def tensor_shape(dims) -> bytes:
    out = b""
    for d in dims:
        out += field_bytes(1, field_varint(1, d))  # Dimension.dim_value
    return out


def value_info(name: str, dims) -> bytes:
    tensor_type = field_varint(1, 1) + field_bytes(2, tensor_shape(dims))  # elem_type FLOAT
    return field_str(1, name) + field_bytes(2, field_bytes(1, tensor_type))


def initializer(name: str, array: np.ndarray) -> bytes:
    out = b""
    for d in array.shape:
        out += field_varint(1, d)  # dims
    out += field_varint(2, 1)  # data_type FLOAT
    out += field_bytes(9, array.astype("<f4").tobytes())  # raw_data
    out += field_str(8, name)
    return out


def node(op_type: str, inputs, outputs, attrs=b"") -> bytes:
    out = b""
    for i in inputs:
        out += field_str(1, i)
    for o in outputs:
        out += field_str(2, o)
    out += field_str(4, op_type)
    return out + attrs


def int_attr(name: str, value: int) -> bytes:
    # AttributeProto: name, i, type=INT(2)
    return field_bytes(7, field_str(1, name) + struct.pack("B", 0x10) + varint(value) +
                       field_varint(20, 2))


def model(graph: bytes) -> bytes:
    opset = field_varint(2, 13)  # default domain, version 13
    return field_varint(1, 8) + field_bytes(7, graph) + field_bytes(8, opset)


def build(path: str, side: int, pooled: bool, out_dim: int) -> None:
    rng = np.random.default_rng(0)
    in_dim = 3 if pooled else 3 * side * side
    # (out, in) with transB=1: the layout OpenCV's FC layer expects
    weights = rng.standard_normal((out_dim, in_dim)) * 0.1
    bias = rng.standard_normal(out_dim) * 0.1

    nodes = b""
    gemm_input = "input"
    if pooled:
        nodes += field_bytes(1, node("GlobalAveragePool", ["input"], ["pool"]))
        gemm_input = "pool"
    nodes += field_bytes(1, node("Flatten", [gemm_input], ["flat"], int_attr("axis", 1)))
    nodes += field_bytes(1, node("Gemm", ["flat", "W", "B"], ["embedding"],
                                 int_attr("transB", 1)))

    graph = (nodes + field_str(2, "tiny") +
             field_bytes(5, initializer("W", weights)) +
             field_bytes(5, initializer("B", bias)) +
             field_bytes(11, value_info("input", [1, 3, side, side])) +
             field_bytes(12, value_info("embedding", [1, out_dim])))
    with open(path, "wb") as f:
        f.write(model(graph))
    print(f"wrote {path}")


if __name__ == "__main__":
    build("tiny_backbone.onnx", 224, pooled=True, out_dim=16)
    build("tiny_wrong_shape.onnx", 64, pooled=False, out_dim=8)
