"""
Kafka Partition Planner

給定 cluster 量測值與應用需求，決定單一 Kafka topic 需要多少 partitions 與 brokers。
"""

__version__ = "0.1.0"
