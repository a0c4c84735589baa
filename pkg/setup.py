"""
Setup script for the tenfold toolkit
"""
from setuptools import setup, find_packages

setup(
    name="tenfold",
    version="1.0.0",
    description="Tenfold-way classification, KR-theory tables and bulk topological invariants",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    python_requires=">=3.10",
    install_requires=[
        "pydantic==2.10.3",
        "python-dotenv==1.0.1",
        "numpy==1.26.4",
        "scipy==1.11.4",
        "aiofiles==24.1.0",
        "loguru==0.7.2",
        "tomli; python_version < '3.11'"
    ],
    extras_require={
        "dev": [
            "pytest",
            "pytest-asyncio",
            "black",
            "flake8",
            "mypy"
        ]
    },
    entry_points={
        "console_scripts": [
            "tenfold=tenfold.main:main",
        ]
    }
)
