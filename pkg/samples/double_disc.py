import sys
from pathlib import Path

from onepw import bounds, textio
from onepw.drawing import double_disc_drawing


def main() -> None:
    disc = textio.load_drawing(Path("corpus/k33-disc.drawing"))
    drawing = double_disc_drawing(disc, rim=(0, 1, 2))
    certificate = bounds.certify(drawing, name="K3,6")
    sys.stdout.write(certificate.text())


if __name__ == "__main__":
    main()
