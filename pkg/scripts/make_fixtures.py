"""Write the JSON fixture corpus into fixtures/ (or $GRASSFOLD_FIXTURES)."""

import json

from grassfold.fixtures import corpus, fixture_dir


def main():
    out = fixture_dir()
    out.mkdir(parents=True, exist_ok=True)
    for name, doc in sorted(corpus().items()):
        path = out / f"{name}.json"
        path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
        print(path)


if __name__ == "__main__":
    main()
