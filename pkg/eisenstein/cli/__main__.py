import sys

import eisenstein.cli.app


if __name__ == '__main__':
    sys.exit(eisenstein.cli.app.main())
