"""Reading and writing maze files.

A maze file is a text file with optional header lines ``start: r,c`` (alternate start
cells), followed by one line per grid row: ``#`` is an obstacle, ``.`` a free cell,
``S`` the entrance and ``E`` the exit. In canonical files, every line ends with a
newline character.

"""
from typing import List, Optional, Tuple

from aoa.space.maze import Cell, MazeGrid

OBSTACLE = "#"
FREE = "."
ENTRANCE = "S"
EXIT = "E"
START_HEADER = "start:"


class MazeFormatError(ValueError):
    """A malformed maze file. ``line`` and ``column`` are 1-based (0 if unknown)."""

    def __init__(self, message: str, line: int = 0, column: int = 0, source=None):
        self.line = line
        self.column = column
        self.source = source
        location = f"line {line}" + (f", column {column}" if column else "")
        if source:
            location = f"{source}: {location}"
        super().__init__(f"{location}: {message}" if line else message)


def _parse_start(text: str, line: int, source) -> Cell:
    value = text[len(START_HEADER) :].strip()
    try:
        row, col = (int(v) for v in value.split(","))
    except ValueError:
        raise MazeFormatError(
            f"invalid start '{value}', expected 'row,col'", line, 1, source
        )
    return row, col


def parse_maze(text: str, source: Optional[str] = None) -> MazeGrid:
    """Parses a maze from its text representation.

    Raises :class:`MazeFormatError` for non-rectangular grids, illegal characters,
    missing or duplicate entrance or exit, and invalid start cells.

    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()

    starts: List[Tuple[Cell, int]] = []
    index = 0
    while index < len(lines) and lines[index].startswith(START_HEADER):
        starts.append((_parse_start(lines[index], index + 1, source), index + 1))
        index += 1
    first_row_line = index + 1
    rows = lines[index:]
    if not rows:
        raise MazeFormatError("maze has no grid rows", max(len(lines), 1), 0, source)

    width = len(rows[0])
    if width == 0:
        raise MazeFormatError("empty grid row", first_row_line, 1, source)
    obstacles = []
    entrance = exit = None
    for r, row in enumerate(rows):
        line = first_row_line + r
        if len(row) != width:
            raise MazeFormatError(
                f"grid is not rectangular: expected {width} columns, found {len(row)}",
                line,
                min(len(row), width) + 1,
                source,
            )
        for c, char in enumerate(row):
            if char == OBSTACLE:
                obstacles.append((r, c))
            elif char == ENTRANCE:
                if entrance is not None:
                    raise MazeFormatError("duplicate entrance 'S'", line, c + 1, source)
                entrance = (r, c)
            elif char == EXIT:
                if exit is not None:
                    raise MazeFormatError("duplicate exit 'E'", line, c + 1, source)
                exit = (r, c)
            elif char != FREE:
                raise MazeFormatError(
                    f"illegal character '{char}'", line, c + 1, source
                )
    if entrance is None:
        raise MazeFormatError("missing entrance 'S'", first_row_line, 0, source)
    if exit is None:
        raise MazeFormatError("missing exit 'E'", first_row_line, 0, source)

    height = len(rows)
    blocked = set(obstacles)
    for cell, line in starts:
        if not (0 <= cell[0] < height and 0 <= cell[1] < width) or cell in blocked:
            raise MazeFormatError(
                f"start {cell[0]},{cell[1]} is out of bounds or an obstacle",
                line,
                1,
                source,
            )
    return MazeGrid(width, height, obstacles, entrance, exit, [s for s, _ in starts])


def serialize_maze(maze: MazeGrid) -> str:
    "Canonical text representation of a maze."
    lines = [f"{START_HEADER} {r},{c}" for r, c in maze.starts]
    for r in range(maze.height):
        row = []
        for c in range(maze.width):
            cell = (r, c)
            if cell == maze.entrance:
                row.append(ENTRANCE)
            elif cell == maze.exit:
                row.append(EXIT)
            elif cell in maze.obstacles:
                row.append(OBSTACLE)
            else:
                row.append(FREE)
        lines.append("".join(row))
    return "".join(line + "\n" for line in lines)


def read_maze(filename: str) -> MazeGrid:
    try:
        with open(filename, "r") as file:
            text = file.read()
    except OSError as e:
        raise IOError(f"cannot read maze file {filename}: {e}") from e
    return parse_maze(text, source=filename)


def write_maze(maze: MazeGrid, filename: str):
    try:
        with open(filename, "w") as file:
            file.write(serialize_maze(maze))
    except OSError as e:
        raise IOError(f"cannot write maze file {filename}: {e}") from e
