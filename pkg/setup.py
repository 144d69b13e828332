from setuptools import setup, find_packages

setup(
    name='bcidx', 
    version='0.1.0', 
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),  
    install_requires=[  
        "pydantic>=2"
    ],
    extras_require={
        "test": ["pytest"],
    },
    entry_points={
        "console_scripts": ["bcidx=bcidx.cli:main"],
    },
    python_requires='>=3.11',
    classifiers=[
        'Programming Language :: Python :: 3',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
    ],
    long_description=open('README.md').read(),
    long_description_content_type='text/markdown',
    license='MIT',
)
