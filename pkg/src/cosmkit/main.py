"""
cosmkit 메인 엔트리 포인트
"""

import sys
from typing import Optional, Sequence

from dotenv import load_dotenv

from .cli.commands import run


def main(argv: Optional[Sequence[str]] = None) -> int:
    """.env 로드 후 명령 실행"""
    load_dotenv()
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
