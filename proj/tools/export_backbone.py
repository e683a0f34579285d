#!/usr/bin/env python3
"""Export the pretrained VGG16 embedding backbone to ONNX.

Downloads torchvision's ImageNet-pretrained VGG16, truncates the classifier
after the second fully-connected layer's ReLU (4096-d post-activation
embedding), and exports an ONNX graph with a fixed 1x3x224x224 input.

Usage:
    python3 tools/export_backbone.py [output.onnx]

Point AFRNET_MODEL_PATH (or --model-path) at the result. The exported file's
SHA-256 is printed so deployments can pin it.
"""

import hashlib
import sys

import torch
import torchvision


def main() -> None:
    out_path = sys.argv[1] if len(sys.argv) > 1 else "vgg16_fc2.onnx"

    vgg = torchvision.models.vgg16(weights=torchvision.models.VGG16_Weights.IMAGENET1K_V1)
    vgg.eval()
    # features -> avgpool -> flatten -> fc1 -> ReLU -> fc2 -> ReLU (dropout dropped)
    classifier = torch.nn.Sequential(
        vgg.classifier[0], vgg.classifier[1], vgg.classifier[3], vgg.classifier[4]
    )
    model = torch.nn.Sequential(vgg.features, vgg.avgpool, torch.nn.Flatten(1), classifier)

    dummy = torch.zeros(1, 3, 224, 224)
    torch.onnx.export(model, dummy, out_path, input_names=["input"], output_names=["embedding"])

    digest = hashlib.sha256(open(out_path, "rb").read()).hexdigest()
    print(f"wrote {out_path}")
    print(f"sha256 {digest}")


if __name__ == "__main__":
    main()
