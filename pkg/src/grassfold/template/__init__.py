"""Marked templates, scripted templates and the face/coface operators."""

from .canon import CanonicalForm, canonical_form
from .marked import MarkedTemplate, generated_subposet, template_of
from .scripted import (
    ScriptedTemplate,
    build,
    coface_A,
    coface_B,
    configuration_from_json,
    face_A,
    face_B,
    realizes,
)

__all__ = [
    "CanonicalForm",
    "MarkedTemplate",
    "ScriptedTemplate",
    "build",
    "canonical_form",
    "coface_A",
    "coface_B",
    "configuration_from_json",
    "face_A",
    "face_B",
    "generated_subposet",
    "realizes",
    "template_of",
]
