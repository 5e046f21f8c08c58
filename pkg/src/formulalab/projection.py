"""Deterministic projections of input variables onto constants and output literals.

A projection pi maps each input variable x_1..x_n to one of 0, 1, y_j or
!y_j for output variables y_1..y_m.  Restrictions are the special case in
which the output namespace coincides with the input namespace and every
non-constant image is the variable itself.

Images are packed into small ints: 0 and 1 are the constants, 2*j encodes
the positive literal y_j and 2*j + 1 the negated literal !y_j (j >= 1, so
literal codes start at 2 and never collide with the constants).
"""

from __future__ import annotations

from dataclasses import dataclass

ZERO = 0
ONE = 1


def const(value: int) -> int:
    if value not in (0, 1):
        raise ValueError(f"constant image must be 0 or 1, got {value!r}")
    return value


def pos(j: int) -> int:
    """Image code for the positive literal y_j."""
    if j < 1:
        raise ValueError(f"output variable index must be >= 1, got {j}")
    return 2 * j


def neg(j: int) -> int:
    """Image code for the negated literal !y_j."""
    if j < 1:
        raise ValueError(f"output variable index must be >= 1, got {j}")
    return 2 * j + 1


def lit(j: int, negated: bool) -> int:
    return neg(j) if negated else pos(j)


def is_const(image: int) -> bool:
    return image < 2


def const_value(image: int) -> int:
    if image >= 2:
        raise ValueError("image is not a constant")
    return image


def var_of(image: int) -> int:
    """Output variable index of a literal image."""
    if image < 2:
        raise ValueError("image is a constant, not a literal")
    return image >> 1


def is_negated(image: int) -> bool:
    if image < 2:
        raise ValueError("image is a constant, not a literal")
    return bool(image & 1)


def image_str(image: int) -> str:
    if image < 2:
        return str(image)
    return ("!y" if image & 1 else "y") + str(image >> 1)


def _image_from_str(text: str) -> int:
    text = text.strip()
    if text in ("0", "1"):
        return int(text)
    negated = text.startswith("!")
    body = text[1:] if negated else text
    if not body.startswith("y"):
        raise ValueError(f"cannot parse projection image {text!r}")
    try:
        j = int(body[1:])
    except ValueError:
        raise ValueError(f"cannot parse projection image {text!r}") from None
    return lit(j, negated)


@dataclass(frozen=True)
class Projection:
    """Map from n input variables into constants and literals over m outputs."""

    n: int
    m: int
    images: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise ValueError("arities must be non-negative")
        if len(self.images) != self.n:
            raise ValueError(
                f"expected {self.n} images, got {len(self.images)}")
        for img in self.images:
            if img < 0:
                raise ValueError(f"bad image code {img}")
            if img >= 2 and (img >> 1) > self.m:
                raise ValueError(
                    f"image {image_str(img)} exceeds target arity {self.m}")

    def image(self, i: int) -> int:
        """Image of input variable x_i (1-based)."""
        if not 1 <= i <= self.n:
            raise IndexError(f"variable x{i} out of range 1..{self.n}")
        return self.images[i - 1]

    def substitute(self, j: int, sigma: int) -> "Projection":
        """Replace output variable y_j by the constant sigma everywhere."""
        if not 1 <= j <= self.m:
            raise IndexError(f"output variable y{j} out of range 1..{self.m}")
        if sigma not in (0, 1):
            raise ValueError(f"substituted value must be 0 or 1, got {sigma}")
        new = []
        for img in self.images:
            if img >= 2 and (img >> 1) == j:
                new.append(sigma ^ (img & 1))
            else:
                new.append(img)
        return Projection(self.n, self.m, tuple(new))

    def used_outputs(self) -> tuple[int, ...]:
        """Sorted output variables that occur in some image."""
        return tuple(sorted({img >> 1 for img in self.images if img >= 2}))

    def is_assignment(self) -> bool:
        """True when every image is a constant."""
        return all(img < 2 for img in self.images)

    def assignment_index(self) -> int:
        """Input index whose bit i-1 is the constant image of x_i."""
        if not self.is_assignment():
            raise ValueError("projection still contains live variables")
        out = 0
        for i, img in enumerate(self.images):
            out |= img << i
        return out

    def __str__(self) -> str:
        return ", ".join(
            f"x{i + 1}={image_str(img)}" for i, img in enumerate(self.images))


def identity_restriction(n: int) -> Projection:
    """The restriction that leaves every variable alive."""
    return Projection(n, n, tuple(pos(i) for i in range(1, n + 1)))


def assignment_projection(n: int, index: int, m: int = 0) -> Projection:
    """Projection fixing x_i to bit i-1 of index."""
    return Projection(n, m, tuple((index >> i) & 1 for i in range(n)))


def format_projection(p: Projection) -> str:
    """One `x<i> = <image>` line per input variable."""
    return "\n".join(
        f"x{i + 1} = {image_str(img)}" for i, img in enumerate(p.images)) + "\n"


def parse_projection_lines(lines: list[str], n: int, m: int) -> Projection:
    images = [None] * n
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"bad projection line {line!r}")
        left, right = line.split("=", 1)
        left = left.strip()
        if not left.startswith("x"):
            raise ValueError(f"bad projection variable {left!r}")
        i = int(left[1:])
        if not 1 <= i <= n:
            raise ValueError(f"variable x{i} out of range 1..{n}")
        if images[i - 1] is not None:
            raise ValueError(f"variable x{i} assigned twice")
        images[i - 1] = _image_from_str(right)
    missing = [i + 1 for i, img in enumerate(images) if img is None]
    if missing:
        raise ValueError(f"missing images for x{missing}")
    return Projection(n, m, tuple(images))


def parse_projection(text: str, n: int, m: int) -> Projection:
    return parse_projection_lines(text.splitlines(), n, m)


def random_projection(rng, n: int, m: int, p_const: float = 0.5) -> Projection:
    """Random projection from n inputs onto m outputs (test helper)."""
    images = []
    for _ in range(n):
        if m == 0 or rng.random() < p_const:
            images.append(rng.randint(0, 1))
        else:
            images.append(lit(rng.randint(1, m), rng.random() < 0.5))
    return Projection(n, m, tuple(images))
