"""Console entry point: `liaison <command> ...`."""
import os
import sys


def main():
    """Forward to the `liaison` management command."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'liaison_lab.settings')
    from django.core.management import execute_from_command_line

    execute_from_command_line([sys.argv[0], 'liaison', *sys.argv[1:]])


if __name__ == '__main__':
    main()
