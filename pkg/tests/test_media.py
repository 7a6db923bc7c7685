import itertools
import random

from explora.media import select_image
from explora.search import WikiImage
from explora.text import cosine, tokenize


def img(label):
    return WikiImage(label=label, url=f"https://example.org/{label[:8]}.jpg")


def test_exact_overlap_wins():
    images = [img("March on Washington"), img("Birthplace")]
    assert select_image("March on Washington", images) is images[0]


def test_no_images_gives_none():
    assert select_image("Anything", []) is None


def test_all_disjoint_labels_give_none():
    images = [img("Blue bird"), img("Red fish")]
    assert select_image("Steam engines", images) is None


def test_tie_prefers_first_in_input_order():
    images = [img("river delta"), img("delta river")]
    assert select_image("the river", images) is images[0]


def test_returned_image_attains_maximum():
    rng = random.Random(99)
    words = ["sun", "moon", "star", "cloud", "rain", "wind"]
    for _ in range(50):
        images = [
            img(" ".join(rng.choices(words, k=rng.randint(1, 4))))
            for _ in range(rng.randint(1, 6))
        ]
        title = " ".join(rng.choices(words, k=2))
        chosen = select_image(title, images)
        title_vec = {t: 1.0 for t in tokenize(title)}
        scores = [
            cosine({t: 1.0 for t in tokenize(i.label)}, title_vec) for i in images
        ]
        if chosen is None:
            assert max(scores) == 0.0
        else:
            assert scores[images.index(chosen)] == max(scores)


def test_permutation_changes_result_only_among_ties():
    images = [img("sun and moon"), img("moon alone"), img("stars")]
    title = "the moon"
    base = select_image(title, images)
    title_vec = {t: 1.0 for t in tokenize(title)}
    best = max(
        cosine({t: 1.0 for t in tokenize(i.label)}, title_vec) for i in images
    )
    for perm in itertools.permutations(images):
        chosen = select_image(title, list(perm))
        score = cosine({t: 1.0 for t in tokenize(chosen.label)}, title_vec)
        assert score == best
    assert base is not None
