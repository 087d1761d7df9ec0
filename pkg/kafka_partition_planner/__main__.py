"""Entry point for `python -m kafka_partition_planner`."""

from kafka_partition_planner.cli import main

if __name__ == "__main__":
    main()
