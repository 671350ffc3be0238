"""Tests for sftpressure"""
