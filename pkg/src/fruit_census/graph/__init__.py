"""LangGraph pipeline module for the fruit census workflow.

This module provides the main entry point for creating the pipeline
graph. Import create_pipeline_graph to build and compile the StateGraph.
"""

from fruit_census.graph.graph import create_pipeline_graph

__all__ = ["create_pipeline_graph"]
