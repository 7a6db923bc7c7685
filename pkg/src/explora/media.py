"""Image selection for section summaries: pick the image whose label is
most similar to the section title."""
from __future__ import annotations

from explora.search import WikiImage
from explora.text import cosine, tokenize


def _unit_vector(text: str) -> dict[str, float]:
    return {token: 1.0 for token in tokenize(text)}


def select_image(section_title: str, images: list[WikiImage]) -> WikiImage | None:
    """Image whose label has the highest cosine similarity to the title.

    Labels are compared with unit term weights (they are too short for IDF
    to mean anything). Ties go to the earlier image; if every score is zero
    no image is returned, because an unrelated image is worse than none.
    """
    title_vec = _unit_vector(section_title)
    best: WikiImage | None = None
    best_score = 0.0
    for image in images:
        score = cosine(_unit_vector(image.label), title_vec)
        if score > best_score:
            best, best_score = image, score
    return best
