"""Reader/writer for the problem-definition text format.

The format is a strict sectioned key-value file::

    # comment
    [domain]
    a = -1.0
    b = 1.0
    xi = 0.0                 # interface points; omit or leave empty when none

    [rho]
    values = 1.0 2.0         # one per subinterval

    [potential]
    q1 = 0.0                 # polynomial coefficients, ascending degree
    q2 = 0.0

    [boundary.left]
    delta1 = 1.0
    delta2 = 0.0
    delta3 = 0.0
    delta4 = -1.0

    [boundary.right]
    gamma1 = 1.0
    gamma2 = 0.0
    gamma3 = 0.0
    gamma4 = -1.0

    [transmission.1]
    row1 = 1.0 0.0 -0.5 0.0  # plus-slope, plus-value, minus-slope, minus-value
    row2 = 0.0 1.0 0.0 -2.0

Lists are whitespace- or comma-separated.  Unknown sections or keys are
rejected, as are missing required keys; parse errors carry line numbers.
"""

import re

from .errors import ProblemFileError
from .problem import ProblemSpec, TransmissionMatrix

_SECTION_RE = re.compile(r"^\[([A-Za-z0-9_.]+)\]$")
_KEY_RE = re.compile(r"^([A-Za-z0-9_]+)\s*=\s*(.*)$")

_FIXED_SECTIONS = {
    "domain": {"a", "b", "xi"},
    "rho": {"values"},
    "boundary.left": {"delta1", "delta2", "delta3", "delta4"},
    "boundary.right": {"gamma1", "gamma2", "gamma3", "gamma4"},
}
_TRANS_RE = re.compile(r"^transmission\.([1-9][0-9]*)$")
_POT_KEY_RE = re.compile(r"^q([1-9][0-9]*)$")


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def _floats(text: str, lineno: int, key: str):
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ProblemFileError(f"key '{key}': {exc}", lineno) from exc


def _scalar(text: str, lineno: int, key: str) -> float:
    vals = _floats(text, lineno, key)
    if len(vals) != 1:
        raise ProblemFileError(f"key '{key}' expects a single number", lineno)
    return vals[0]


def parse_problem_text(text: str) -> ProblemSpec:
    sections: dict[str, dict[str, tuple]] = {}
    lines_of: dict[str, dict[str, int]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        m = _SECTION_RE.match(line)
        if m:
            name = m.group(1)
            if name not in _FIXED_SECTIONS and name != "potential" \
                    and not _TRANS_RE.match(name):
                raise ProblemFileError(f"unknown section [{name}]", lineno)
            if name in sections:
                raise ProblemFileError(f"duplicate section [{name}]", lineno)
            sections[name] = {}
            lines_of[name] = {}
            current = name
            continue
        m = _KEY_RE.match(line)
        if not m:
            raise ProblemFileError(f"cannot parse line: {raw.strip()!r}", lineno)
        if current is None:
            raise ProblemFileError("key outside of any section", lineno)
        key, value = m.group(1), m.group(2)
        allowed = _FIXED_SECTIONS.get(current)
        if allowed is not None and key not in allowed:
            raise ProblemFileError(f"unknown key '{key}' in [{current}]", lineno)
        if current == "potential" and not _POT_KEY_RE.match(key):
            raise ProblemFileError(f"unknown key '{key}' in [potential]", lineno)
        if _TRANS_RE.match(current) and key not in ("row1", "row2"):
            raise ProblemFileError(f"unknown key '{key}' in [{current}]", lineno)
        if key in sections[current]:
            raise ProblemFileError(f"duplicate key '{key}' in [{current}]", lineno)
        sections[current][key] = value
        lines_of[current][key] = lineno

    def need(section, key):
        if section not in sections:
            raise ProblemFileError(f"missing section [{section}]")
        if key not in sections[section]:
            raise ProblemFileError(f"missing key '{key}' in [{section}]")
        return sections[section][key], lines_of[section][key]

    a = _scalar(*need("domain", "a"), key="a")
    b = _scalar(*need("domain", "b"), key="b")
    if "xi" in sections.get("domain", {}):
        xi = _floats(sections["domain"]["xi"], lines_of["domain"]["xi"], "xi")
    else:
        xi = ()
    n = len(xi)

    rho = _floats(*need("rho", "values"), key="values")

    if "potential" not in sections:
        raise ProblemFileError("missing section [potential]")
    q = []
    for i in range(1, n + 2):
        key = f"q{i}"
        if key not in sections["potential"]:
            raise ProblemFileError(f"missing key '{key}' in [potential]")
        q.append(_floats(sections["potential"][key],
                         lines_of["potential"][key], key))
    extra = set(sections["potential"]) - {f"q{i}" for i in range(1, n + 2)}
    if extra:
        raise ProblemFileError(
            f"[potential] has keys {sorted(extra)} beyond q1..q{n + 1}")

    delta = tuple(_scalar(*need("boundary.left", f"delta{k}"), key=f"delta{k}")
                  for k in range(1, 5))
    gamma = tuple(_scalar(*need("boundary.right", f"gamma{k}"), key=f"gamma{k}")
                  for k in range(1, 5))

    trans = []
    for i in range(1, n + 1):
        sec = f"transmission.{i}"
        row1, l1 = need(sec, "row1")
        row2, l2 = need(sec, "row2")
        r1 = _floats(row1, l1, "row1")
        r2 = _floats(row2, l2, "row2")
        if len(r1) != 4 or len(r2) != 4:
            raise ProblemFileError(f"rows in [{sec}] must have 4 entries",
                                   l1 if len(r1) != 4 else l2)
        trans.append(TransmissionMatrix(r1, r2))
    stray = [s for s in sections if _TRANS_RE.match(s)
             and int(_TRANS_RE.match(s).group(1)) > n]
    if stray:
        raise ProblemFileError(
            f"transmission sections {stray} exceed the {n} interface points")

    return ProblemSpec(a=a, b=b, xi=xi, rho=rho, q=tuple(q),
                       delta=delta, gamma=gamma, trans=tuple(trans))


def read_problem_file(path) -> ProblemSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_problem_text(fh.read())


def format_problem(spec: ProblemSpec) -> str:
    lines = ["[domain]", f"a = {spec.a!r}", f"b = {spec.b!r}"]
    if spec.xi:
        lines.append("xi = " + " ".join(repr(v) for v in spec.xi))
    lines += ["", "[rho]", "values = " + " ".join(repr(v) for v in spec.rho)]
    lines += ["", "[potential]"]
    for i, coeffs in enumerate(spec.q, start=1):
        lines.append(f"q{i} = " + " ".join(repr(c) for c in coeffs))
    lines += ["", "[boundary.left]"]
    lines += [f"delta{k} = {v!r}" for k, v in enumerate(spec.delta, start=1)]
    lines += ["", "[boundary.right]"]
    lines += [f"gamma{k} = {v!r}" for k, v in enumerate(spec.gamma, start=1)]
    for i, tm in enumerate(spec.trans, start=1):
        lines += ["", f"[transmission.{i}]"]
        lines.append("row1 = " + " ".join(repr(v) for v in tm.row1))
        lines.append("row2 = " + " ".join(repr(v) for v in tm.row2))
    return "\n".join(lines) + "\n"


def write_problem_file(spec: ProblemSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_problem(spec))
