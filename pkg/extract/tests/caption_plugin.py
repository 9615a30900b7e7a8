"""Tiny captioner used to exercise the module:callable plugin path."""


def describe(image_path, k):
    return [f"plugin caption {i}" for i in range(k)]
