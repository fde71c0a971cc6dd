#!/usr/bin/env python3
"""Regenerates mini_corpus.jsonl: 20 small mini-Java commits.

Commit 13 uses a for loop, which the parser rejects; commit 17 only edits a
comment, so its delta graph is empty.
"""
import difflib
import hashlib
import json
import pathlib

COMMITS = [
    ("mini/graphs", "Graph.java", "Use strict bound when filtering nodes",
     """class Graph {
  int limit;
  int count(int size) {
    if (size >= limit) {
      return 1;
    }
    return 0;
  }
}
""",
     """class Graph {
  int limit;
  int count(int size) {
    if (size > limit) {
      return 1;
    }
    return 0;
  }
}
"""),
    ("mini/graphs", "Graph.java", "Add edge counter to graph",
     """class Graph {
  int nodes;
  void addNode() {
    nodes = nodes + 1;
  }
}
""",
     """class Graph {
  int nodes;
  int edges;
  void addNode() {
    nodes = nodes + 1;
  }
  void addEdge() {
    edges = edges + 1;
  }
}
"""),
    ("mini/graphs", "Walker.java", "Stop walking when depth reaches zero",
     """class Walker {
  int walk(int depth) {
    int steps = 0;
    while (depth > 0) {
      steps = steps + 1;
      depth = depth - 1;
    }
    return steps;
  }
}
""",
     """class Walker {
  int walk(int depth) {
    int steps = 0;
    if (depth <= 0) {
      return 0;
    }
    while (depth > 0) {
      steps = steps + 1;
      depth = depth - 1;
    }
    return steps;
  }
}
"""),
    ("mini/graphs", "Cache.java", "Initialize cache size from capacity",
     """class Cache {
  int size;
  void reset(int capacity) {
    size = 0;
  }
}
""",
     """class Cache {
  int size;
  void reset(int capacity) {
    size = capacity;
  }
}
"""),
    ("mini/graphs", "Logger.java", "Log message before flushing",
     """class Logger {
  void close(Sink sink) {
    sink.flush();
  }
}
""",
     """class Logger {
  void close(Sink sink) {
    sink.write("closing");
    sink.flush();
  }
}
"""),
    ("mini/shapes", "Circle.java", "Fix area computation for circles",
     """class Circle {
  int radius;
  int area() {
    return radius * 3;
  }
}
""",
     """class Circle {
  int radius;
  int area() {
    return radius * radius * 3;
  }
}
"""),
    ("mini/shapes", "Rect.java", "Rename width parameter in scale",
     """class Rect {
  int width;
  void scale(int w) {
    width = width * w;
  }
}
""",
     """class Rect {
  int width;
  void scale(int factor) {
    width = width * factor;
  }
}
"""),
    ("mini/shapes", "Square.java", "Remove unused side check",
     """class Square {
  int side;
  int perimeter() {
    if (side < 0) {
      side = 0;
    }
    return side * 4;
  }
}
""",
     """class Square {
  int side;
  int perimeter() {
    return side * 4;
  }
}
"""),
    ("mini/shapes", "Point.java", "Add point distance helper",
     """class Point {
  int x;
  int y;
}
""",
     """class Point {
  int x;
  int y;
  int manhattan(Point other) {
    int dx = x - other.x;
    int dy = y - other.y;
    return dx + dy;
  }
}
"""),
    ("mini/shapes", "Canvas.java", "Clear canvas before drawing shapes",
     """class Canvas {
  void draw(Shape shape) {
    shape.render(this);
  }
}
""",
     """class Canvas {
  void draw(Shape shape) {
    this.clear();
    shape.render(this);
  }
}
"""),
    ("mini/bank", "Account.java", "Reject withdrawals above balance",
     """class Account {
  int balance;
  void withdraw(int amount) {
    balance = balance - amount;
  }
}
""",
     """class Account {
  int balance;
  void withdraw(int amount) {
    if (amount > balance) {
      return;
    }
    balance = balance - amount;
  }
}
"""),
    ("mini/bank", "Account.java", "Add deposit method to account",
     """class Account {
  int balance;
}
""",
     """class Account {
  int balance;
  void deposit(int amount) {
    balance = balance + amount;
  }
}
"""),
    ("mini/bank", "Interest.java", "Compound interest per month",
     """class Interest {
  int apply(int balance, int rate) {
    return balance + balance * rate / 100;
  }
}
""",
     """class Interest {
  int apply(int balance, int rate) {
    for (int m = 0; m < 12; m = m + 1) {
      balance = balance + balance * rate / 1200;
    }
    return balance;
  }
}
"""),
    ("mini/bank", "Ledger.java", "Track number of ledger entries",
     """class Ledger {
  int total;
  void record(int amount) {
    total = total + amount;
  }
}
""",
     """class Ledger {
  int total;
  int entries;
  void record(int amount) {
    total = total + amount;
    entries = entries + 1;
  }
}
"""),
    ("mini/bank", "Fees.java", "Lower the monthly fee",
     """class Fees {
  int monthly() {
    return 15;
  }
}
""",
     """class Fees {
  int monthly() {
    return 10;
  }
}
"""),
    ("mini/text", "Counter.java", "Count words instead of characters",
     """class Counter {
  int count(Text text) {
    return text.length();
  }
}
""",
     """class Counter {
  int count(Text text) {
    return text.words();
  }
}
"""),
    ("mini/text", "Trimmer.java", "Document trimming behavior",
     """class Trimmer {
  String trim(String s) {
    return s.strip();
  }
}
""",
     """class Trimmer {
  // Removes leading and trailing whitespace.
  String trim(String s) {
    return s.strip();
  }
}
"""),
    ("mini/text", "Parser.java", "Return early on empty input",
     """class Parser {
  int parse(Text input) {
    int n = input.length();
    return n;
  }
}
""",
     """class Parser {
  int parse(Text input) {
    int n = input.length();
    if (n == 0) {
      return -1;
    }
    return n;
  }
}
"""),
    ("mini/text", "Buffer.java", "Grow buffer while too small",
     """class Buffer {
  int capacity;
  void ensure(int needed) {
    if (capacity < needed) {
      capacity = capacity * 2;
    }
  }
}
""",
     """class Buffer {
  int capacity;
  void ensure(int needed) {
    while (capacity < needed) {
      capacity = capacity * 2;
    }
  }
}
"""),
    ("mini/text", "Joiner.java", "Add separator field to joiner",
     """class Joiner {
  String join(Text a, Text b) {
    return a.concat(b);
  }
}
""",
     """class Joiner {
  String separator;
  String join(Text a, Text b) {
    return a.concat(separator).concat(b);
  }
}
"""),
]


def main():
    out = pathlib.Path(__file__).with_name("mini_corpus.jsonl")
    lines = []
    for i, (repo, path, message, old, new) in enumerate(COMMITS):
        sha = hashlib.sha1(f"{repo}\0{i}\0{old}\0{new}".encode()).hexdigest()
        diff = "".join(difflib.unified_diff(
            old.splitlines(keepends=True), new.splitlines(keepends=True),
            fromfile=f"a/{path}", tofile=f"b/{path}"))
        lines.append(json.dumps({
            "repo": repo, "sha": sha, "path": path, "message_raw": message + "\n",
            "old_text": old, "new_text": new, "diff_text": diff,
        }, ensure_ascii=False))
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
